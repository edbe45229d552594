//! The acceptance suite: ten numbered criteria, each reported as one line.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{BurniatConfig, Variant};
use crate::degeneration::{self, CollectionVariant};
use crate::delpezzo6::{self, EffDecomposition, NefDecomposition, NefGenerator, SymmetricCoords};
use crate::effective::{Engine, FiberKind, TABLE_DEGREE};
use crate::error::{Error, Result};
use crate::lattice::{GroupIndex, SurfaceLattice, YClass};
use crate::picard::{self, Combo, GeneratorTable, TableOverride, XClass};

pub const DEFAULT_SEED: u64 = 20_240_607;

/// Section names accepted by `--only`, in criterion order.
pub const SECTIONS: [&str; 10] = [
    "torsion",
    "index",
    "table",
    "exceptions",
    "decompositions",
    "step2",
    "step3",
    "step4",
    "collection",
    "properties",
];

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Edits applied to the `K^2 = 6` table before anything runs.
    pub overrides: Vec<TableOverride>,
    /// Criterion numbers to run; empty runs all.
    pub only: Vec<u8>,
}

impl VerifyOptions {
    pub fn new() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            ..Default::default()
        }
    }
}

/// Criterion number for a section name or a number literal.
pub fn section_id(name: &str) -> Result<u8> {
    if let Some(i) = SECTIONS.iter().position(|s| *s == name) {
        return Ok(i as u8 + 1);
    }
    match name.parse::<u8>() {
        Ok(n @ 1..=10) => Ok(n),
        _ => Err(Error::Parse(format!(
            "unknown section {name:?}; expected 1-10 or one of {}",
            SECTIONS.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn name(&self) -> &'static str {
        SECTIONS[self.id as usize - 1]
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {:<14} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name(),
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Shared state: the `K^2 = 6` table (possibly overridden) and the two
/// engines built on it.
pub struct Suite {
    seed: u64,
    table: GeneratorTable,
    smooth: Engine,
    degenerate: Engine,
}

impl Suite {
    /// Fails early when the overridden table is inconsistent.
    pub fn new(opts: &VerifyOptions) -> Result<Self> {
        let cfg = BurniatConfig::standard(6, Variant::Plain)?;
        let table = GeneratorTable::with_overrides(&cfg, &opts.overrides)?;
        let smooth = Engine::with_table(FiberKind::Smooth, table.clone(), TABLE_DEGREE)?;
        let degenerate = Engine::with_table(FiberKind::Degenerate, table.clone(), TABLE_DEGREE)?;
        Ok(Suite {
            seed: opts.seed,
            table,
            smooth,
            degenerate,
        })
    }

    pub fn run(&self, id: u8) -> CriterionResult {
        let start = Instant::now();
        let out = match id {
            1 => self.torsion_ranks(),
            2 => self.indices(),
            3 => self.table_suite(),
            4 => self.exceptions(),
            5 => self.decompositions(),
            6 => self.step2(),
            7 => self.step3(),
            8 => self.step4(),
            9 => self.collection(),
            10 => self.properties(),
            _ => Err(Error::Precondition(format!("no criterion {id}"))),
        };
        let (passed, detail) = match out {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        CriterionResult {
            id,
            passed,
            detail,
            elapsed: start.elapsed(),
        }
    }

    pub fn run_all(&self, only: &[u8]) -> Vec<CriterionResult> {
        (1..=10u8)
            .filter(|i| only.is_empty() || only.contains(i))
            .map(|i| self.run(i))
            .collect()
    }

    fn torsion_ranks(&self) -> Result<(bool, String)> {
        let expect = [6, 5, 4, 4, 3, 3];
        let got: Vec<usize> = BurniatConfig::all_standard()
            .iter()
            .map(|c| picard::torsion_subgroup(c).len())
            .collect();
        Ok((got == expect, format!("dims {got:?}, expected {expect:?}")))
    }

    fn indices(&self) -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for cfg in BurniatConfig::all_standard() {
            let table = GeneratorTable::build(&cfg)?;
            let idx = table.image_index();
            let want = picard::expected_index(cfg.ksq);
            let mut line = format!("{} index {}", cfg.name(), show(idx));
            if idx != GroupIndex::Finite(want) {
                ok = false;
                line.push_str(&format!(" (expected {want})"));
            }
            if cfg.ksq <= 5 {
                let span = cfg.ramification_span_index()?;
                let want_span = if cfg.ksq == 2 { 2 } else { 1 };
                line.push_str(&format!(" span {}", show(span)));
                if span != GroupIndex::Finite(want_span) {
                    ok = false;
                    line.push_str(&format!(" (expected {want_span})"));
                }
            }
            parts.push(line);
        }
        Ok((ok, parts.join("; ")))
    }

    fn table_suite(&self) -> Result<(bool, String)> {
        let mut ok = true;
        let mut parts = Vec::new();
        for cfg in BurniatConfig::all_standard() {
            let rows = picard::fill_table(&cfg)?;
            let table = GeneratorTable::unchecked(&cfg, rows)?;
            let failed: Vec<_> = table.checks().into_iter().filter(|c| !c.passed).collect();
            if !failed.is_empty() {
                ok = false;
                let names: Vec<_> = failed.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
                parts.push(format!("{}: {}", cfg.name(), names.join(", ")));
            }
        }
        // internal torsion vectors, from the table in use
        let mut vecs = Vec::new();
        for (combo, want) in picard::torsion_combinations(0).into_iter().take(9) {
            let x = self.table.phi(&combo);
            if !x.is_torsion() || x.torsion_vec() != want {
                ok = false;
                parts.push(format!("{combo} -> {x}, expected torsion {want}"));
            }
            vecs.push(x.torsion_vec());
        }
        let rank = crate::torsion::span_rank(&vecs);
        if rank != 6 {
            ok = false;
            parts.push(format!("torsion vectors span rank {rank}"));
        }
        let a = self
            .table
            .phi(&Combo::parse("A1-A2", 0)?)
            .torsion_vec()
            .to_string();
        if a != "00 10 00" {
            ok = false;
            parts.push(format!("A1-A2 -> {a}"));
        }
        if ok {
            parts.push("all checks pass on 6 configurations; A1-A2 = 00 10 00".into());
        }
        Ok((ok, parts.join("; ")))
    }

    fn exceptions(&self) -> Result<(bool, String)> {
        let mut ok = true;
        let mut bad = Vec::new();
        let mut found = [0usize; 4];
        let classes = delpezzo6::nef_classes(12);
        for y in &classes {
            let pa = y.arithmetic_genus();
            let kind = delpezzo6::classify_exceptional(y)?;
            match kind {
                delpezzo6::ExceptionalType::Exceptional { family, n, .. } => {
                    found[family as usize] += 1;
                    if pa != family.genus(n) {
                        ok = false;
                        bad.push(format!("{y}: p_a {pa} but {family} n={n}"));
                    }
                }
                delpezzo6::ExceptionalType::NonExceptional if pa <= 0 => {
                    ok = false;
                    bad.push(format!("{y}: p_a {pa} outside the families"));
                }
                _ => {}
            }
        }
        if found.iter().any(|&c| c == 0) {
            ok = false;
            bad.push(format!("family counts {found:?}"));
        }
        let mut detail = format!("{} nef classes, family counts {found:?}", classes.len());
        if !bad.is_empty() {
            detail.push_str(&format!("; {}", bad.join("; ")));
        }
        Ok((ok, detail))
    }

    fn decompositions(&self) -> Result<(bool, String)> {
        let mut checked = 0;
        let mut bad = Vec::new();
        for y in symmetric_box(-4, 8) {
            checked += 1;
            let eff = delpezzo6::eff_decompose(&y)?;
            let eff_oracle = brute_eff(&y);
            match (&eff, &eff_oracle) {
                (Some(e), Some(_)) if e.total() == y => {}
                (None, None) => {}
                _ => bad.push(format!("eff {y}: {eff:?} vs {eff_oracle:?}")),
            }
            let nef = delpezzo6::nef_decompose(&y)?;
            let nef_oracle = brute_nef(&y);
            match (&nef, &nef_oracle) {
                (Some(n), Some(_)) if n.total() == y => {}
                (None, None) => {}
                _ => bad.push(format!("nef {y}: {nef:?} vs {nef_oracle:?}")),
            }
        }
        let ok = bad.is_empty();
        let mut detail = format!("{checked} classes against exhaustive search");
        if !ok {
            detail.push_str(&format!("; {} mismatches, first {}", bad.len(), bad[0]));
        }
        Ok((ok, detail))
    }

    fn step2(&self) -> Result<(bool, String)> {
        let e = &self.smooth;
        let expected: Vec<XClass> = ["(3; 1 10; 1 10; 1 10)", "(3; 0 00; 0 00; 0 00)", "(3; 1 00; 1 00; 1 00)"]
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        let r3 = e.scan(3)?;
        let mut got: Vec<XClass> = r3.survivors().iter().map(|r| r.class.clone()).collect();
        got.sort();
        let mut want = expected.clone();
        want.sort();
        let mut ok = got == want;
        let mut parts = vec![format!(
            "scan(3) survivors [{}]",
            got.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )];
        if !ok {
            let missing: Vec<String> = want.iter().filter(|x| !got.contains(x)).map(|x| x.to_string()).collect();
            for m in &missing {
                let (red, trace) = e.minimal_form(&m.parse()?)?;
                parts.push(format!("{m} is not minimal: {trace} -> {red}"));
            }
        }
        for d in [6, 8] {
            let r = e.scan(d)?;
            let u = r.unresolved().len();
            parts.push(format!("scan({d}) unresolved {u}"));
            ok &= u == 0;
            if let Some(bad) = r.records.iter().find(|x| x.verdict.is_in_s() && e.trusted_id(&x.class).is_some()) {
                ok = false;
                parts.push(format!("trusted {} received a certificate", bad.class));
            }
        }
        for t in e.trusted() {
            if let Some(c) = e.s_membership(&t.class) {
                ok = false;
                parts.push(format!("trusted {} has certificate {c}", t.id));
            }
        }
        Ok((ok, parts.join("; ")))
    }

    fn step3(&self) -> Result<(bool, String)> {
        let r = self.smooth.step3_tables()?;
        let fails = r.failures();
        let bare = r.rows.iter().filter(|x| x.curve.is_none()).count();
        let with_f = r.rows.len() - bare;
        let ok = fails.is_empty() && bare == 64 && with_f == 6 * 64;
        let mut detail = format!("{} rows (K+nu: {bare}, K+F+nu: {with_f}), {} failures", r.rows.len(), fails.len());
        if let Some(f) = fails.first() {
            detail.push_str(&format!("; first {} -> {}", f.class, f.verdict));
        }
        Ok((ok, detail))
    }

    fn step4(&self) -> Result<(bool, String)> {
        let r = self.smooth.step4(8, 12)?;
        let fails = r.failures();
        let ok = fails.is_empty() && !r.rows.is_empty();
        let mut detail = format!(
            "{} exceptional minimal classes, {} by induction, {} failures",
            r.rows.len(),
            r.inducted(),
            fails.len()
        );
        if let Some(f) = fails.first() {
            detail.push_str(&format!("; first {} -> {}", f.class, f.verdict));
        }
        Ok((ok, detail))
    }

    fn collection(&self) -> Result<(bool, String)> {
        let s = degeneration::exceptional_collection_check_with(&self.smooth, CollectionVariant::Original)?;
        let d = degeneration::exceptional_collection_check_with(&self.degenerate, CollectionVariant::Original)?;
        let chi_s: Vec<i64> = s.pairs.iter().map(|r| r.chi).collect();
        let chi_d: Vec<i64> = d.pairs.iter().map(|r| r.chi).collect();
        let flat = chi_s == chi_d;
        let ok = s.passed() && d.passed() && flat;
        let mut parts = vec![format!(
            "smooth {} failing, degenerate {} failing, chi {}",
            s.failures().len(),
            d.failures().len(),
            if flat { "identical" } else { "differs" }
        )];
        if !ok {
            let f: Vec<String> = s
                .failures()
                .iter()
                .map(|r| format!("({},{}) chi={}", r.i, r.j, r.chi))
                .collect();
            parts.push(format!("smooth failures {}", f.join(" ")));
            let c = degeneration::exceptional_collection_check_with(&self.smooth, CollectionVariant::Corrected)?;
            let cd = degeneration::exceptional_collection_check_with(&self.degenerate, CollectionVariant::Corrected)?;
            parts.push(format!(
                "with L2 = A0+B3+C3+A2-A1: smooth {} degenerate {}",
                if c.passed() { "pass" } else { "fail" },
                if cd.passed() { "pass" } else { "fail" }
            ));
        }
        Ok((ok, parts.join("; ")))
    }

    fn properties(&self) -> Result<(bool, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut bad = Vec::new();
        let l = SurfaceLattice::new(3);
        for _ in 0..1000 {
            let mut pick = || {
                let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-8..=8)).collect();
                l.class(&c).expect("rank 4")
            };
            let (a, b) = (pick(), pick());
            let lhs = (&a + &b).arithmetic_genus();
            let rhs = a.arithmetic_genus() + b.arithmetic_genus() + a.dot(&b) - 1;
            if lhs != rhs {
                bad.push(format!("p_a({a} + {b})"));
            }
        }
        let e = &self.smooth;
        let first = e.scan(8)?;
        let mut validated = 0;
        for r in &first.records {
            e.validate_verdict(&r.class, &r.verdict)
                .map_err(|err| Error::Precondition(format!("{}: {err}", r.class)))?;
            validated += 1;
        }
        for r in e.step3_tables()?.rows {
            e.validate_verdict(&r.class, &r.verdict)?;
            validated += 1;
        }
        for r in e.step4(8, 12)?.rows {
            e.validate_verdict(&r.class, &r.verdict)?;
            validated += 1;
        }
        let second = e.scan(8)?;
        let same = first.to_structured() == second.to_structured();
        if !same {
            bad.push("scan(8) differs between runs".into());
        }
        let ok = bad.is_empty();
        let mut detail = format!(
            "seed {}: 1000 p_a pairs, {validated} verdicts re-validated, scan(8) {}",
            self.seed,
            if same { "byte-identical" } else { "NOT identical" }
        );
        if !ok {
            detail.push_str(&format!("; {}", bad.join("; ")));
        }
        Ok((ok, detail))
    }
}

fn show(i: GroupIndex) -> String {
    match i {
        GroupIndex::Finite(n) => n.to_string(),
        GroupIndex::Infinite => "inf".into(),
    }
}

/// Degree-6 del Pezzo classes with all seven symmetric coordinates in
/// `[lo, hi]`.
pub fn symmetric_box(lo: i64, hi: i64) -> Vec<YClass> {
    let l = SurfaceLattice::new(3);
    let mut out = Vec::new();
    let b = hi.abs().max(lo.abs()) * 2;
    for nh in -b..=b {
        for n1 in -b..=b {
            for n2 in -b..=b {
                for n3 in -b..=b {
                    let y = l.class(&[nh, n1, n2, n3]).expect("rank 4");
                    let s = delpezzo6::to_symmetric(&y).expect("dp6");
                    if in_box(&s, lo, hi) {
                        out.push(y);
                    }
                }
            }
        }
    }
    out
}

fn in_box(s: &SymmetricCoords, lo: i64, hi: i64) -> bool {
    std::iter::once(s.d)
        .chain(s.zero)
        .chain(s.three)
        .all(|v| (lo..=hi).contains(&v))
}

/// Exhaustive nonnegative search over the six `(-1)`-curves.
pub fn brute_eff(y: &YClass) -> Option<EffDecomposition> {
    let cs = delpezzo6::boundary_classes();
    let d = delpezzo6::to_symmetric(y).ok()?.d;
    if d < 0 {
        return None;
    }
    let mut n = [0i64; 6];
    fn go(i: usize, left: i64, n: &mut [i64; 6], cs: &[YClass; 6], y: &YClass) -> bool {
        if i == 5 {
            n[5] = left;
            let mut t = y.lattice().zero();
            for (k, c) in n.iter().zip(cs) {
                t = &t + &(*k * c);
            }
            return &t == y;
        }
        for k in 0..=left {
            n[i] = k;
            if go(i + 1, left - k, n, cs, y) {
                return true;
            }
        }
        false
    }
    go(0, d, &mut n, &cs, y).then_some(EffDecomposition(n))
}

/// Exhaustive nonnegative search over `f1, f2, f3, h1, h2`.
pub fn brute_nef(y: &YClass) -> Option<NefDecomposition> {
    let gs = NefGenerator::ALL.map(|g| g.class());
    let degs = [2i64, 2, 2, 3, 3];
    let d = delpezzo6::to_symmetric(y).ok()?.d;
    if d < 0 {
        return None;
    }
    let mut n = [0i64; 5];
    fn go(i: usize, left: i64, n: &mut [i64; 5], gs: &[YClass; 5], degs: &[i64; 5], y: &YClass) -> bool {
        if i == 5 {
            if left != 0 {
                return false;
            }
            let mut t = y.lattice().zero();
            for (k, c) in n.iter().zip(gs) {
                t = &t + &(*k * c);
            }
            return &t == y;
        }
        let mut k = 0;
        while k * degs[i] <= left {
            n[i] = k;
            if go(i + 1, left - k * degs[i], n, gs, degs, y) {
                return true;
            }
            k += 1;
        }
        n[i] = 0;
        false
    }
    go(0, d, &mut n, &gs, &degs, y).then_some(NefDecomposition(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_round_trip() {
        for (i, s) in SECTIONS.iter().enumerate() {
            assert_eq!(section_id(s).unwrap(), i as u8 + 1);
        }
        assert_eq!(section_id("7").unwrap(), 7);
        assert!(section_id("11").is_err());
        assert!(section_id("nope").is_err());
    }

    #[test]
    fn box_and_oracles() {
        let b = symmetric_box(-1, 2);
        let l = SurfaceLattice::new(3);
        assert!(b.contains(&l.e(1)));
        assert!(b.contains(&l.zero()));
        assert!(brute_eff(&l.e(1)).is_some());
        assert!(brute_nef(&l.e(1)).is_none());
        assert_eq!(brute_nef(&l.h()).unwrap().0, [0, 0, 0, 1, 0]);
    }
}
