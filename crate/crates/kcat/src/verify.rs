//! Verification suites run by `kcat verify`.

use crate::ajs::{check_compatibility, end_structure, fully_faithful_check};
use crate::alcove::{Alcove, FaceType};
use crate::character::{ch_q_lambda, star_bs as char_star_bs};
use crate::error::Result;
use crate::hecke::{e_lambda, HeckeElt, PeriodicElt};
use crate::kobj::hom::{hom_dim, hom_dim_k, prepare};
use crate::kobj::sections::stalk;
use crate::kobj::validate::{corrupted, validate, Property, Status};
use crate::kobj::{bott_samelson, engine_char, make_q_lambda, star_bs, KObj};
use crate::laurent::LaurentPoly;
use crate::root_datum::{DatumName, RootDatum};
use crate::symbolic::Ring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;

pub const SUITES: [&str; 8] = ["order-oracle", "hecke-axioms", "ch-module-hom", "stalk-lemmas", "S/LE", "adjunction-dims", "F-compatibility", "ajs-homs"];

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Hom degrees checked are `-dmax..=dmax`.
    pub dmax: i32,
    pub radius: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { dmax: 6, radius: 2, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub cases: usize,
    pub witness: Option<String>,
}

struct Tally {
    cases: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { cases: 0, witness: None }
    }

    /// Record one case; keeps the first failure.
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok && self.witness.is_none() {
            self.witness = Some(what());
        }
        self.witness.is_none()
    }
}

/// All words of length at most `max_len`.
pub fn words(nf: usize, max_len: usize) -> Vec<Vec<FaceType>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<FaceType>> = vec![vec![]];
    for _ in 0..max_len {
        let next: Vec<Vec<FaceType>> = layer
            .iter()
            .flat_map(|w| (0..nf).map(move |s| [w.clone(), vec![FaceType(s)]].concat()))
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn word_len(d: &RootDatum) -> usize {
    if d.rank == 1 {
        2
    } else {
        1
    }
}

fn objects(r: &Ring, len: usize) -> Result<Vec<(String, KObj)>> {
    let lam = vec![0; r.d.rank];
    words(r.d.faces().len(), len)
        .into_iter()
        .map(|w| Ok((format!("{:?}", r.d.word_names(&w)), bott_samelson(r, &lam, &w)?)))
        .collect()
}

fn cover_closure(d: &RootDatum, a: &Alcove, bound: i64) -> BTreeSet<Alcove> {
    let hi = vec![bound; d.npos];
    let mut seen = BTreeSet::new();
    let mut stack = vec![a.clone()];
    seen.insert(a.clone());
    while let Some(c) = stack.pop() {
        for x in d.covers_within(&c, &hi) {
            if d.coords(&x).iter().all(|&k| k >= -bound) && seen.insert(x.clone()) {
                stack.push(x);
            }
        }
    }
    seen
}

fn order_oracle(r: &Ring, cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let d = &r.d;
    let ball = d.ball(cfg.radius);
    let reach = ball.iter().flat_map(|a| d.coords(a)).map(i64::abs).max().unwrap_or(0);
    for a in &ball {
        let up = cover_closure(d, a, reach + 6);
        for b in &ball {
            if !t.check(d.leq(a, b) == up.contains(b), || format!("leq({:?}, {:?})", d.coords(a), d.coords(b))) {
                return Ok(());
            }
        }
    }
    for a in &ball {
        for i in 0..d.rank {
            for sign in [1, -1] {
                let mu: Vec<i64> = d.roots[i].weight.iter().map(|x| sign * x).collect();
                let b = d.translate(a, &mu);
                t.check(d.leq(a, &b) == (sign > 0), || format!("{:?} against its translate by {sign} alpha_{i}", d.coords(a)));
            }
        }
    }
    Ok(())
}

fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let pairs: Vec<(i32, i64)> = (0..rng.gen_range(1..=2)).map(|_| (rng.gen_range(-2..=2), rng.gen_range(-3..=3))).collect();
    LaurentPoly::from_pairs(&pairs)
}

fn hecke_axioms(r: &Ring, cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let d = &r.d;
    let nf = d.faces().len();
    for s in 0..nf {
        let s = FaceType(s);
        let lhs = HeckeElt::simple(d, s).add(&HeckeElt::unit(d).scale(&LaurentPoly::mono(-1, -1)));
        let prod = lhs.mul(d, &HeckeElt::bs_generator(d, s));
        t.check(prod == HeckeElt::zero(), || format!("quadratic relation for {:?}", d.word_names(&[s])));
        for u in (s.0 + 1)..nf {
            let u = FaceType(u);
            let f = d.fund();
            let mut a = f.clone();
            let order = (1..=6).find(|_| {
                a = d.right_act(&d.right_act(&a, s), u);
                a == f
            });
            if let Some(m) = order {
                let alt = |x: FaceType, y: FaceType| (0..m).fold(HeckeElt::unit(d), |h, i| h.mul_simple(d, if i % 2 == 0 { x } else { y }));
                t.check(alt(s, u) == alt(u, s), || format!("braid relation for {:?}", d.word_names(&[s, u])));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let ball = d.ball(cfg.radius);
    for _ in 0..100 {
        let mut p = PeriodicElt::zero();
        let mut h1 = HeckeElt::zero();
        let mut h2 = HeckeElt::zero();
        for _ in 0..2 {
            p.add_term(ball[rng.gen_range(0..ball.len())].clone(), &random_laurent(&mut rng));
            h1 = h1.add(&HeckeElt::basis(ball[rng.gen_range(0..ball.len())].clone()).scale(&random_laurent(&mut rng)));
            h2 = h2.add(&HeckeElt::basis(ball[rng.gen_range(0..ball.len())].clone()).scale(&random_laurent(&mut rng)));
        }
        let ok = p.act(d, &h1.mul(d, &h2)) == p.act(d, &h1).act(d, &h2);
        t.check(ok, || format!("module law for p = {}", p.to_json(d)));
    }
    Ok(())
}

fn ch_module_hom(r: &Ring, _cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let d = &r.d;
    for (w, m) in objects(r, word_len(d))? {
        let cm = engine_char(r, &m)?;
        for s in 0..d.faces().len() {
            let s = FaceType(s);
            let cms = engine_char(r, &star_bs(r, &m, s))?;
            let ok = cms == char_star_bs(d, &cm, s) && cms.ch(d) == cm.ch(d).act(d, &HeckeElt::bs_generator(d, s));
            t.check(ok, || format!("ch(M*B_s) for M from {w}, s = {:?}", d.word_names(&[s])));
        }
    }
    Ok(())
}

fn weights(d: &RootDatum, radius: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d.rank {
        out = out.into_iter().flat_map(|c| (-radius..=radius).map(move |x| [c.clone(), vec![x]].concat())).collect();
    }
    out
}

fn stalk_lemmas(r: &Ring, cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let d = &r.d;
    for lam in weights(d, cfg.radius as i64) {
        let amin = d.box_max(&lam)?;
        let eng = engine_char(r, &make_q_lambda(r, &lam)?)?;
        let expect = e_lambda(d, &lam)?.scale(&LaurentPoly::v_pow(2 * d.length(&amin) as i32));
        t.check(eng.ch(d) == expect && ch_q_lambda(d, &lam)? == expect, || format!("ch(Q_{:?})", lam));
        for a in d.wlambda_orbit(&lam)? {
            let want = LaurentPoly::v_pow(2 * d.dist(&a, &amin) as i32);
            t.check(eng.get(&a) == want, || format!("stalk of Q_{:?} at {:?}", lam, d.coords(&a)));
        }
    }
    // extreme stalk of Bott-Samelson objects along reduced words that stay in the box
    let lam = vec![0; d.rank];
    let amin = d.box_max(&lam)?;
    let in_box = d.box_alcoves(&lam);
    for w in words(d.faces().len(), 3) {
        let top = d.right_act_word(&amin, &w);
        if d.coxeter_length(&d.right_act_word(&d.fund(), &w)) != w.len() as i64 || !in_box.contains(&top) {
            continue;
        }
        let got = stalk(r, &bott_samelson(r, &lam, &w)?, &top)?.grk();
        t.check(got == LaurentPoly::v_pow(w.len() as i32), || format!("extreme stalk for {:?} is {got}", d.word_names(&w)));
    }
    Ok(())
}

fn s_le(r: &Ring, _cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for (w, m) in objects(r, word_len(&r.d))? {
        let rep = validate(r, &m);
        t.check(rep.passed(), || format!("object from {w}: {}", rep.to_json()));
    }
    if r.d.name == DatumName::A1xA1 {
        let controls = [
            (Property::S, corrupted::gluing(r, &[1, 2], &[2, 1], 0)?),
            (Property::ES, corrupted::gluing(r, &[1, 2], &[2, 1], 0)?),
            (Property::LE, corrupted::localization(r, &[1, 1], &[1, 2], 0)?),
            (Property::StandardFiltration, corrupted::non_free_stalk(r, &[1, 1], &[1, 2])?),
        ];
        for (p, m) in &controls {
            let ok = matches!(validate(r, m).check(*p).status, Status::Fail(_));
            t.check(ok, || format!("corrupted control for {} was not rejected", p.name()));
        }
    }
    Ok(())
}

fn adjunction_dims(r: &Ring, cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    let objs = objects(r, word_len(&r.d) - 1)?;
    for (wm, m) in &objs {
        for (wn, n) in &objs {
            for s in 0..r.d.faces().len() {
                let s = FaceType(s);
                let (ms, n0) = (prepare(r, &star_bs(r, m, s))?, prepare(r, n)?);
                let (m0, ns) = (prepare(r, m)?, prepare(r, &star_bs(r, n, s))?);
                for d in -cfg.dmax..=cfg.dmax {
                    let ok = hom_dim(r, &ms, &n0, d) == hom_dim(r, &m0, &ns, d) && hom_dim_k(r, &ms, &n0, d) == hom_dim_k(r, &m0, &ns, d);
                    t.check(ok, || format!("M from {wm}, N from {wn}, s = {:?}, degree {d}", r.d.word_names(&[s])));
                }
            }
        }
    }
    Ok(())
}

fn f_compatibility(r: &Ring, _cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for (w, m) in objects(r, word_len(&r.d))? {
        for s in 0..r.d.faces().len() {
            let s = FaceType(s);
            let res = check_compatibility(r, &m, s)?;
            t.check(res.is_none(), || format!("M from {w}, s = {:?}: {}", r.d.word_names(&[s]), res.clone().unwrap_or_default()));
        }
    }
    Ok(())
}

fn ajs_homs(r: &Ring, cfg: &VerifyConfig, t: &mut Tally) -> Result<()> {
    for a in r.d.ball(1) {
        for root in 0..r.d.npos {
            let st = end_structure(r, &a, root)?;
            t.check(st.matches(), || format!("local Hom table at {:?}, root {root}", r.d.coords(&a)));
        }
    }
    let degrees: Vec<i32> = (-cfg.dmax..=cfg.dmax).collect();
    let objs = objects(r, word_len(&r.d) - 1)?;
    for (wm, m) in &objs {
        for (wn, n) in &objs {
            for (d, k, f) in fully_faithful_check(r, m, n, &degrees)? {
                t.check(k == f, || format!("Hom from {wm} to {wn} in degree {d}: {k} against {f}"));
            }
        }
    }
    Ok(())
}

pub fn run_suite(r: &Ring, suite: &str, cfg: &VerifyConfig) -> Result<SuiteResult> {
    let mut t = Tally::new();
    match suite {
        "order-oracle" => order_oracle(r, cfg, &mut t)?,
        "hecke-axioms" => hecke_axioms(r, cfg, &mut t)?,
        "ch-module-hom" => ch_module_hom(r, cfg, &mut t)?,
        "stalk-lemmas" => stalk_lemmas(r, cfg, &mut t)?,
        "S/LE" => s_le(r, cfg, &mut t)?,
        "adjunction-dims" => adjunction_dims(r, cfg, &mut t)?,
        "F-compatibility" => f_compatibility(r, cfg, &mut t)?,
        "ajs-homs" => ajs_homs(r, cfg, &mut t)?,
        other => return Err(crate::Error::Parse(format!("unknown suite `{other}`"))),
    }
    Ok(SuiteResult { suite: suite.to_string(), passed: t.witness.is_none(), cases: t.cases, witness: t.witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn a1_suites_pass() {
        let r = Ring::new(RootDatum::build(DatumName::A1), Field::RATIONALS).unwrap();
        let cfg = VerifyConfig { dmax: 2, ..Default::default() };
        for s in ["order-oracle", "hecke-axioms", "stalk-lemmas", "adjunction-dims"] {
            let res = run_suite(&r, s, &cfg).unwrap();
            assert!(res.passed, "{s}: {:?}", res.witness);
            assert!(res.cases > 0);
        }
        assert!(run_suite(&r, "nope", &cfg).is_err());
    }

    #[test]
    fn controls_are_rejected() {
        let r = Ring::new(RootDatum::build(DatumName::A1xA1), Field::RATIONALS).unwrap();
        let res = run_suite(&r, "S/LE", &VerifyConfig::default()).unwrap();
        assert!(res.passed, "{:?}", res.witness);
    }
}
