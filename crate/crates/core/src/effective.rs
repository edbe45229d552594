//! Effectivity on the `K^2 = 6` surface: minimal-form reduction, a prover
//! for non-effectivity, membership in the semigroup `S` generated by the
//! twelve curves, and the degree scans.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::config::{y_class, BurniatConfig, Variant};
use crate::delpezzo6::{self, ExceptionalType, Family};
use crate::error::{Error, Result};
use crate::labels::{CurveLabel, BOUNDARY};
use crate::picard::{BoundaryBlock, Combo, Generator, GeneratorTable, XClass};
use crate::torsion::{Torsion2, TorsionVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberKind {
    Smooth,
    Degenerate,
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiberKind::Smooth => "smooth",
            FiberKind::Degenerate => "degenerate",
        })
    }
}

impl std::str::FromStr for FiberKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth" => Ok(FiberKind::Smooth),
            "degenerate" => Ok(FiberKind::Degenerate),
            _ => Err(Error::Parse(format!("unknown fiber kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `D.F < 0`.
    NegativeIntersection,
    /// `D.F = 0` and `D|_F` a nonzero 2-torsion point.
    ZeroDegreeNonzeroTorsion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReductionStep {
    pub curve: CurveLabel,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub kind: FiberKind,
    pub start: XClass,
    pub steps: Vec<ReductionStep>,
    pub result: XClass,
}

fn rule_tag(kind: FiberKind, rule: Rule) -> &'static str {
    match (kind, rule) {
        (FiberKind::Smooth, Rule::NegativeIntersection) => "neg",
        (FiberKind::Smooth, Rule::ZeroDegreeNonzeroTorsion) => "tor",
        (FiberKind::Degenerate, Rule::NegativeIntersection) => "neg0",
        (FiberKind::Degenerate, Rule::ZeroDegreeNonzeroTorsion) => "tor0",
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| format!("{}:{}", s.curve, rule_tag(self.kind, s.rule)))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

impl ReductionTrace {
    /// Replay every step against `table`.
    pub fn validate(&self, table: &GeneratorTable) -> Result<()> {
        let mut x = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let b = table.restrict(&x, step.curve)?;
            let ok = match step.rule {
                Rule::NegativeIntersection => b.r < 0,
                Rule::ZeroDegreeNonzeroTorsion => b.r == 0 && !b.t.is_zero(),
            };
            if !ok || x.d < 0 {
                return Err(Error::Precondition(format!(
                    "step {i} ({}) does not apply to {x}: restriction {b}",
                    step.curve
                )));
            }
            let next = &x - &table.phi_generator(Generator::Curve(step.curve));
            if next.d != x.d - 1 {
                return Err(Error::Precondition(format!("step {i} does not lower the degree by one")));
            }
            x = next;
        }
        if x != self.result {
            return Err(Error::Precondition(format!("trace ends at {x}, recorded {}", self.result)));
        }
        if self.steps.len() as i64 != self.start.d - self.result.d {
            return Err(Error::Precondition("trace length differs from the degree drop".into()));
        }
        Ok(())
    }
}

/// Nonnegative multiplicities of the twelve curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SCertificate(pub [i64; 12]);

impl SCertificate {
    pub fn combo(&self) -> Combo {
        Combo {
            curves: self.0,
            exceptional: Vec::new(),
        }
    }

    pub fn validate(&self, table: &GeneratorTable, target: &XClass) -> Result<()> {
        if self.0.iter().any(|&n| n < 0) {
            return Err(Error::Precondition("negative multiplicity in certificate".into()));
        }
        let got = table.phi(&self.combo());
        if &got != target {
            return Err(Error::Precondition(format!("certificate sums to {got}, not {target}")));
        }
        Ok(())
    }

    pub fn add(&self, g: CurveLabel) -> SCertificate {
        let mut c = *self;
        c.0[g.position()] += 1;
        c
    }
}

impl fmt::Display for SCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = CurveLabel::all()
            .iter()
            .zip(self.0)
            .filter(|(_, n)| *n != 0)
            .map(|(l, n)| format!("{l}:{n}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseCase {
    NegativeDegree,
    Trusted(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    InS(SCertificate),
    NonEffective { trace: ReductionTrace, base: BaseCase },
    Unresolved { note: Option<String> },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::InS(_) => "InS",
            Verdict::NonEffective { .. } => "NonEffective",
            Verdict::Unresolved { .. } => "Unresolved",
        }
    }

    pub fn is_in_s(&self) -> bool {
        matches!(self, Verdict::InS(_))
    }

    pub fn is_non_effective(&self) -> bool {
        matches!(self, Verdict::NonEffective { .. })
    }

    pub fn evidence(&self) -> String {
        match self {
            Verdict::InS(c) => c.to_string(),
            Verdict::NonEffective { trace, base } => {
                let b = match base {
                    BaseCase::NegativeDegree => "negative-degree".to_string(),
                    BaseCase::Trusted(id) => format!("trusted:{id}"),
                };
                format!("{b} {trace}")
            }
            Verdict::Unresolved { note } => note.clone().unwrap_or_else(|| "-".into()),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tag(), self.evidence())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrustedClass {
    pub id: String,
    pub class: XClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Compact {
    d: i32,
    r: [i32; 3],
    t: u8,
}

impl Compact {
    fn of(x: &XClass) -> Compact {
        Compact {
            d: x.d as i32,
            r: x.blocks.map(|b| b.r as i32),
            t: x.torsion_vec().bits(),
        }
    }

    fn expand(self) -> XClass {
        let tv = TorsionVec::from_bits(self.t).blocks();
        XClass::new(
            self.d as i64,
            [0, 1, 2].map(|i| BoundaryBlock::new(self.r[i] as i64, tv[i])),
        )
    }

    fn add(self, o: Compact) -> Compact {
        Compact {
            d: self.d + o.d,
            r: [self.r[0] + o.r[0], self.r[1] + o.r[1], self.r[2] + o.r[2]],
            t: self.t ^ o.t,
        }
    }

    fn sub(self, o: Compact) -> Compact {
        Compact {
            d: self.d - o.d,
            r: [self.r[0] - o.r[0], self.r[1] - o.r[1], self.r[2] - o.r[2]],
            t: self.t ^ o.t,
        }
    }

    /// Whether the underlying `Y`-class pairs nonnegatively with the nef
    /// generators.
    fn y_effective(self) -> bool {
        let s = self.d + self.r.iter().sum::<i32>();
        if s.rem_euclid(3) != 0 {
            return false;
        }
        let nh = s / 3;
        let c = self.r.map(|r| -r);
        nh >= 0 && c.iter().all(|&ci| nh + ci >= 0) && 2 * nh + c.iter().sum::<i32>() >= 0
    }
}

/// Every element of `S` up to a fixed degree, by dynamic programming over
/// the degree; each entry keeps the last generator and its predecessor.
#[derive(Debug, Clone)]
pub struct SemigroupTable {
    levels: Vec<BTreeMap<Compact, (u8, Compact)>>,
}

const NO_GEN: u8 = u8::MAX;

impl SemigroupTable {
    fn build(gens: &[Compact; 12], max_degree: i64) -> Self {
        let zero = Compact {
            d: 0,
            r: [0; 3],
            t: 0,
        };
        let mut levels: Vec<BTreeMap<Compact, (u8, Compact)>> = vec![BTreeMap::from([(zero, (NO_GEN, zero))])];
        for d in 1..=max_degree.max(0) as usize {
            let mut level = BTreeMap::new();
            for (gi, g) in gens.iter().enumerate() {
                let gd = g.d as usize;
                if gd > d {
                    continue;
                }
                for prev in levels[d - gd].keys() {
                    level.entry(prev.add(*g)).or_insert((gi as u8, *prev));
                }
            }
            levels.push(level);
        }
        SemigroupTable { levels }
    }

    pub fn max_degree(&self) -> i64 {
        self.levels.len() as i64 - 1
    }

    /// The classes of degree `d`, in table order.
    pub fn classes(&self, d: i64) -> Vec<XClass> {
        usize::try_from(d)
            .ok()
            .and_then(|d| self.levels.get(d))
            .map(|l| l.keys().map(|c| c.expand()).collect())
            .unwrap_or_default()
    }

    /// Number of distinct classes of each degree.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    fn lookup(&self, x: Compact) -> Option<SCertificate> {
        let d = usize::try_from(x.d).ok()?;
        let mut cur = x;
        self.levels.get(d)?.get(&cur)?;
        let mut cert = SCertificate::default();
        loop {
            let (g, prev) = self.levels[cur.d as usize][&cur];
            if g == NO_GEN {
                return Some(cert);
            }
            cert.0[g as usize] += 1;
            cur = prev;
        }
    }
}

/// The decision procedures for one fibre type.
#[derive(Debug, Clone)]
pub struct Engine {
    kind: FiberKind,
    table: GeneratorTable,
    trusted: Vec<TrustedClass>,
    gens: [Compact; 12],
    semigroup: SemigroupTable,
}

/// Default depth of the semigroup table.
pub const TABLE_DEGREE: i64 = 12;

impl Engine {
    pub fn new(kind: FiberKind) -> Result<Self> {
        Self::with_depth(kind, TABLE_DEGREE)
    }

    pub fn with_depth(kind: FiberKind, depth: i64) -> Result<Self> {
        let cfg = BurniatConfig::standard(6, Variant::Plain)?;
        Self::with_table(kind, GeneratorTable::build(&cfg)?, depth)
    }

    pub fn with_table(kind: FiberKind, table: GeneratorTable, depth: i64) -> Result<Self> {
        if table.n_points() != 0 {
            return Err(Error::Unsupported("effectivity is decided for K^2=6 only".into()));
        }
        let gens = CurveLabel::all().map(|l| Compact::of(&table.phi_generator(Generator::Curve(l))));
        let semigroup = SemigroupTable::build(&gens, depth);
        let trusted = trusted_classes(kind, &table)?;
        let engine = Engine {
            kind,
            table,
            trusted,
            gens,
            semigroup,
        };
        for t in &engine.trusted {
            if let Some(c) = engine.s_membership(&t.class) {
                return Err(Error::TrustViolation(format!("{} = {} has certificate {c}", t.id, t.class)));
            }
        }
        Ok(engine)
    }

    pub fn kind(&self) -> FiberKind {
        self.kind
    }

    pub fn table(&self) -> &GeneratorTable {
        &self.table
    }

    pub fn trusted(&self) -> &[TrustedClass] {
        &self.trusted
    }

    pub fn semigroup(&self) -> &SemigroupTable {
        &self.semigroup
    }

    pub fn canonical(&self) -> XClass {
        self.table.canonical_class().expect("K^2=6 table")
    }

    pub fn trusted_id(&self, x: &XClass) -> Option<&str> {
        self.trusted.iter().find(|t| &t.class == x).map(|t| t.id.as_str())
    }

    /// `chi(D) = p_a` of the underlying `Y`-class.
    pub fn chi(&self, x: &XClass) -> Result<i64> {
        let k = self.canonical();
        Ok(self.table.intersect_x(x, &(x - &k))? / 2 + 1)
    }

    /// The first applicable reduction on `x`, in `BOUNDARY` order.
    pub fn reduction_step(&self, x: &XClass) -> Result<Option<ReductionStep>> {
        let blocks = self.table.restrictions(x)?;
        for (f, b) in BOUNDARY.iter().zip(blocks) {
            if b.r < 0 {
                return Ok(Some(ReductionStep {
                    curve: *f,
                    rule: Rule::NegativeIntersection,
                }));
            }
            if b.r == 0 && !b.t.is_zero() {
                return Ok(Some(ReductionStep {
                    curve: *f,
                    rule: Rule::ZeroDegreeNonzeroTorsion,
                }));
            }
        }
        Ok(None)
    }

    pub fn is_minimal(&self, x: &XClass) -> Result<bool> {
        Ok(self.reduction_step(x)?.is_none())
    }

    /// Subtract base curves until none is forced or the degree is negative.
    pub fn minimal_form(&self, x: &XClass) -> Result<(XClass, ReductionTrace)> {
        let mut cur = x.clone();
        let mut steps = Vec::new();
        while cur.d >= 0 {
            let Some(step) = self.reduction_step(&cur)? else { break };
            cur = &cur - &self.table.phi_generator(Generator::Curve(step.curve));
            steps.push(step);
        }
        let trace = ReductionTrace {
            kind: self.kind,
            start: x.clone(),
            steps,
            result: cur.clone(),
        };
        Ok((cur, trace))
    }

    fn prove_core(&self, x: &XClass) -> Result<Option<Verdict>> {
        let (reduced, trace) = self.minimal_form(x)?;
        if reduced.d < 0 {
            return Ok(Some(Verdict::NonEffective {
                trace,
                base: BaseCase::NegativeDegree,
            }));
        }
        if let Some(id) = self.trusted_id(&reduced) {
            return Ok(Some(Verdict::NonEffective {
                trace,
                base: BaseCase::Trusted(id.to_string()),
            }));
        }
        Ok(None)
    }

    /// `NonEffective` with evidence, or `Unresolved`. When `chi(x) > 0` and
    /// `K - x` is provably non-effective, `x` is effective; that is noted but
    /// left `Unresolved` since no certificate is known.
    pub fn prove_non_effective(&self, x: &XClass) -> Result<Verdict> {
        if let Some(v) = self.prove_core(x)? {
            return Ok(v);
        }
        let chi = self.chi(x)?;
        if chi > 0 {
            let dual = &self.canonical() - x;
            if self.prove_core(&dual)?.is_some() {
                return Ok(Verdict::Unresolved {
                    note: Some(format!("effective by Riemann-Roch: chi={chi}, K-D non-effective")),
                });
            }
        }
        Ok(Verdict::Unresolved { note: None })
    }

    /// A certificate for `x` in `S`, if one exists.
    pub fn s_membership(&self, x: &XClass) -> Option<SCertificate> {
        if x.n_points() != 0 || x.d < 0 {
            return None;
        }
        let c = Compact::of(x);
        if c.d as i64 <= self.semigroup.max_degree() {
            return self.semigroup.lookup(c);
        }
        let mut failed = HashSet::new();
        self.search(c, &mut failed)
    }

    fn search(&self, x: Compact, failed: &mut HashSet<Compact>) -> Option<SCertificate> {
        if x.d as i64 <= self.semigroup.max_degree() {
            return self.semigroup.lookup(x);
        }
        if failed.contains(&x) {
            return None;
        }
        for (i, g) in self.gens.iter().enumerate() {
            let rest = x.sub(*g);
            if !rest.y_effective() {
                continue;
            }
            if let Some(c) = self.search(rest, failed) {
                return Some(c.add(CurveLabel::all()[i]));
            }
        }
        failed.insert(x);
        None
    }

    /// Membership first, then the non-effectivity prover. A certificate for
    /// a class reducing to a trusted one is a hard error.
    pub fn classify(&self, x: &XClass) -> Result<Verdict> {
        let cert = self.s_membership(x);
        let proof = self.prove_core(x)?;
        match (cert, proof) {
            (Some(c), Some(p)) => Err(Error::TrustViolation(format!("{x}: certificate {c} against {p}"))),
            (Some(c), None) => Ok(Verdict::InS(c)),
            (None, _) => self.prove_non_effective(x),
        }
    }

    /// Re-check any evidence carried by `v` for `x`.
    pub fn validate_verdict(&self, x: &XClass, v: &Verdict) -> Result<()> {
        match v {
            Verdict::InS(c) => c.validate(&self.table, x),
            Verdict::NonEffective { trace, base } => {
                if &trace.start != x {
                    return Err(Error::Precondition("trace starts elsewhere".into()));
                }
                trace.validate(&self.table)?;
                match base {
                    BaseCase::NegativeDegree if trace.result.d < 0 => Ok(()),
                    BaseCase::Trusted(id) if self.trusted_id(&trace.result) == Some(id.as_str()) => Ok(()),
                    _ => Err(Error::Precondition(format!("base case does not hold for {}", trace.result))),
                }
            }
            Verdict::Unresolved { .. } => Ok(()),
        }
    }

    /// All classes over the nef `Y`-classes of degree `<= max_degree`,
    /// each with the 64 torsion values.
    pub fn candidates(&self, max_degree: i64) -> Vec<XClass> {
        let mut out = Vec::new();
        for y in delpezzo6::nef_classes(max_degree) {
            let s = delpezzo6::to_symmetric(&y).expect("dp6 class");
            for t in TorsionVec::all() {
                let tb = t.blocks();
                out.push(XClass::new(
                    s.d,
                    [0, 1, 2].map(|i| BoundaryBlock::new(s.zero[i], tb[i])),
                ));
            }
        }
        out
    }

    pub fn scan(&self, max_degree: i64) -> Result<ScanReport> {
        if max_degree > TABLE_DEGREE {
            return Err(Error::Precondition(format!("scan degree {max_degree} exceeds {TABLE_DEGREE}")));
        }
        let records = self
            .candidates(max_degree)
            .into_par_iter()
            .map(|x| {
                let minimal = self.is_minimal(&x)?;
                let verdict = self.classify(&x)?;
                Ok(ScanRecord {
                    class: x,
                    minimal,
                    verdict,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ScanReport {
            kind: self.kind,
            max_degree,
            records,
        })
    }

    /// `K + nu` for the 63 nonzero torsions and `K + F + nu` for the
    /// 6 x 64 pairs, plus bare `K`.
    pub fn step3_tables(&self) -> Result<Step3Report> {
        let k = self.canonical();
        let mut rows = Vec::new();
        for t in TorsionVec::all() {
            let x = &k + &torsion_class(t);
            let expect_in_s = !t.is_zero();
            rows.push(Step3Row {
                curve: None,
                torsion: t,
                verdict: self.classify(&x)?,
                expect_in_s,
                class: x,
            });
        }
        for f in BOUNDARY {
            let kf = &k + &self.table.phi_generator(Generator::Curve(f));
            for t in TorsionVec::all() {
                let x = &kf + &torsion_class(t);
                rows.push(Step3Row {
                    curve: Some(f),
                    torsion: t,
                    verdict: self.classify(&x)?,
                    expect_in_s: true,
                    class: x,
                });
            }
        }
        Ok(Step3Report { rows })
    }

    /// For `x` of type 1-3 and degree `>= 9`: subtract an internal curve
    /// whose class is the family's ruling fibre and recurse, grounding in
    /// the search at degree `<= ground`.
    pub fn exceptional_induction(&self, x: &XClass, ground: i64) -> Result<InductionOutcome> {
        let kind = self.exceptional_kind(x)?;
        if !matches!(
            kind,
            ExceptionalType::Exceptional {
                family: Family::Type1 | Family::Type2 | Family::Type3,
                ..
            }
        ) {
            return Err(Error::Precondition(format!("{x} is not of type 1, 2 or 3")));
        }
        if x.d < 9 {
            return Err(Error::Precondition(format!("{x} has degree below 9")));
        }
        let mut memo = HashMap::new();
        let mut path = Vec::new();
        let verdict = match self.induct(x, ground, &mut memo, &mut path)? {
            Some(c) => Verdict::InS(c),
            None => Verdict::Unresolved {
                note: Some("induction exhausted both fibre curves".into()),
            },
        };
        path.reverse();
        Ok(InductionOutcome { verdict, path })
    }

    /// Every minimal exceptional-type class with `7 <= d <= top`: direct
    /// search up to `ground`, induction above it.
    pub fn step4(&self, ground: i64, top: i64) -> Result<Step4Report> {
        if top > TABLE_DEGREE {
            return Err(Error::Precondition(format!("degree {top} exceeds {TABLE_DEGREE}")));
        }
        let mut todo = Vec::new();
        for x in self.candidates(top) {
            if x.d < 7 || !self.is_minimal(&x)? {
                continue;
            }
            let kind = self.exceptional_kind(&x)?;
            if kind.is_exceptional() {
                todo.push((x, kind));
            }
        }
        let rows = todo
            .into_par_iter()
            .map(|(x, kind)| {
                let (verdict, path) = if x.d <= ground {
                    let v = match self.s_membership(&x) {
                        Some(c) => Verdict::InS(c),
                        None => Verdict::Unresolved { note: None },
                    };
                    (v, Vec::new())
                } else {
                    let out = self.exceptional_induction(&x, ground)?;
                    (out.verdict, out.path)
                };
                Ok(Step4Row {
                    class: x,
                    kind,
                    verdict,
                    path,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Step4Report { ground, rows })
    }

    fn exceptional_kind(&self, x: &XClass) -> Result<ExceptionalType> {
        let y = x.y_class()?;
        delpezzo6::classify_exceptional(&y)
    }

    fn induct(
        &self,
        x: &XClass,
        ground: i64,
        memo: &mut HashMap<XClass, Option<SCertificate>>,
        path: &mut Vec<CurveLabel>,
    ) -> Result<Option<SCertificate>> {
        if x.d <= ground {
            return Ok(self.s_membership(x));
        }
        if let Some(r) = memo.get(x) {
            return Ok(*r);
        }
        let kind = self.exceptional_kind(x)?;
        let Some(fibre) = delpezzo6::family_fibre(&kind) else {
            memo.insert(x.clone(), None);
            return Ok(None);
        };
        let curves: Vec<CurveLabel> = CurveLabel::all()
            .into_iter()
            .filter(|l| l.is_internal() && y_class(*l) == fibre)
            .collect();
        for c in curves {
            let rest = x - &self.table.phi_generator(Generator::Curve(c));
            if !delpezzo6::is_nef(&rest.y_class()?) {
                continue;
            }
            let depth = path.len();
            if let Some(cert) = self.induct(&rest, ground, memo, path)? {
                path.push(c);
                let out = cert.add(c);
                memo.insert(x.clone(), Some(out));
                return Ok(Some(out));
            }
            path.truncate(depth);
        }
        memo.insert(x.clone(), None);
        Ok(None)
    }
}

/// The numerically trivial class with torsion `t`.
pub fn torsion_class(t: TorsionVec) -> XClass {
    XClass::new(0, t.blocks().map(|b| BoundaryBlock::new(0, b)))
}

/// The trusted non-effective classes for a fibre type.
pub fn trusted_classes(kind: FiberKind, table: &GeneratorTable) -> Result<Vec<TrustedClass>> {
    let t10 = BoundaryBlock::new(1, Torsion2::T10);
    let corner = XClass::new(3, [t10; 3]);
    let mut orbit = vec![corner];
    let mut i = 0;
    while i < orbit.len() {
        for img in [table.swap_03(&orbit[i])?, table.rotate(&orbit[i])?] {
            if !orbit.contains(&img) {
                orbit.push(img);
            }
        }
        i += 1;
    }
    let mut out: Vec<TrustedClass> = orbit
        .into_iter()
        .enumerate()
        .map(|(i, class)| TrustedClass {
            id: if i == 0 { "corner".into() } else { format!("corner/{i}") },
            class,
        })
        .collect();
    let mut extra = Vec::new();
    if kind == FiberKind::Smooth {
        let one = BoundaryBlock::new(1, Torsion2::ZERO);
        extra.push(("degree3-trivial", XClass::new(3, [BoundaryBlock::ZERO; 3])));
        extra.push(("degree3-untwisted", XClass::new(3, [one; 3])));
    }
    extra.push(("canonical", table.canonical_class()?));
    for (id, class) in extra {
        if out.iter().all(|t| t.class != class) {
            out.push(TrustedClass { id: id.into(), class });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRecord {
    pub class: XClass,
    pub minimal: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanCounts {
    pub enumerated: usize,
    pub minimal: usize,
    pub in_s: usize,
    pub non_effective: usize,
    pub unresolved: usize,
    pub minimal_not_in_s: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub kind: FiberKind,
    pub max_degree: i64,
    pub records: Vec<ScanRecord>,
}

pub const REPORT_VERSION: &str = "burniat-scan 1";

impl ScanReport {
    pub fn counts(&self) -> ScanCounts {
        let mut c = ScanCounts {
            enumerated: self.records.len(),
            ..Default::default()
        };
        for r in &self.records {
            c.minimal += usize::from(r.minimal);
            match r.verdict {
                Verdict::InS(_) => c.in_s += 1,
                Verdict::NonEffective { .. } => c.non_effective += 1,
                Verdict::Unresolved { .. } => c.unresolved += 1,
            }
            if r.minimal && !r.verdict.is_in_s() {
                c.minimal_not_in_s += 1;
            }
        }
        c
    }

    /// Minimal-form classes without a certificate.
    pub fn survivors(&self) -> Vec<&ScanRecord> {
        self.records
            .iter()
            .filter(|r| r.minimal && !r.verdict.is_in_s())
            .collect()
    }

    pub fn unresolved(&self) -> Vec<&ScanRecord> {
        self.records
            .iter()
            .filter(|r| matches!(r.verdict, Verdict::Unresolved { .. }))
            .collect()
    }

    pub fn summary_line(&self) -> String {
        let c = self.counts();
        format!(
            "summary enumerated={} minimal={} in_s={} non_effective={} unresolved={} minimal_not_in_s={}",
            c.enumerated, c.minimal, c.in_s, c.non_effective, c.unresolved, c.minimal_not_in_s
        )
    }

    /// Versioned header, one tab-separated record per class, summary.
    pub fn to_structured(&self) -> String {
        let mut s = format!("# {REPORT_VERSION} fiber={} max_degree={}\n", self.kind, self.max_degree);
        for r in &self.records {
            s.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                r.class,
                if r.minimal { "minimal" } else { "reducible" },
                r.verdict.tag(),
                r.verdict.evidence()
            ));
        }
        s.push_str(&self.summary_line());
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut s = format!("scan up to degree {} ({} fibre)\n", self.max_degree, self.kind);
        let surv = self.survivors();
        s.push_str(&format!("minimal-form classes not in S: {}\n", surv.len()));
        for r in surv {
            s.push_str(&format!("  {}  {}\n", r.class, r.verdict));
        }
        s.push_str(&self.summary_line());
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step3Row {
    pub curve: Option<CurveLabel>,
    pub torsion: TorsionVec,
    pub class: XClass,
    pub verdict: Verdict,
    pub expect_in_s: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step3Report {
    pub rows: Vec<Step3Row>,
}

impl Step3Report {
    pub fn failures(&self) -> Vec<&Step3Row> {
        self.rows
            .iter()
            .filter(|r| r.verdict.is_in_s() != r.expect_in_s)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step4Row {
    pub class: XClass,
    pub kind: ExceptionalType,
    pub verdict: Verdict,
    /// Empty for rows settled by direct search.
    pub path: Vec<CurveLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step4Report {
    pub ground: i64,
    pub rows: Vec<Step4Row>,
}

impl Step4Report {
    pub fn failures(&self) -> Vec<&Step4Row> {
        self.rows.iter().filter(|r| !r.verdict.is_in_s()).collect()
    }

    pub fn inducted(&self) -> usize {
        self.rows.iter().filter(|r| r.class.d > self.ground).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionOutcome {
    pub verdict: Verdict,
    /// Fibre curves subtracted, outermost first.
    pub path: Vec<CurveLabel>,
}
