//! Python bindings for `kcat`.

use kcat::alcove::{Alcove, FaceType};
use kcat::character::{bott_samelson_char, CharObj};
use kcat::kobj::hom::{hom_dim, prepare};
use kcat::kobj::split::{identify, multiplicity_table, split, EndAlgebra, SplitOptions};
use kcat::kobj::validate::{validate, Status};
use kcat::kobj::{bott_samelson, engine_char, star_bs, KObj};
use kcat::laurent::LaurentPoly;
use kcat::root_datum::{DatumName, RootDatum};
use kcat::scalar::Field;
use kcat::symbolic::Ring as CoreRing;
use kcat::verify::{run_suite, VerifyConfig, SUITES};
use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use std::sync::Arc;

fn err(e: kcat::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn laurent(p: &LaurentPoly) -> PyResult<Vec<(i32, i64)>> {
    p.terms()
        .map(|(e, c)| i64::try_from(c).map(|c| (*e, c)).map_err(|_| PyOverflowError::new_err("coefficient exceeds 64 bits")))
        .collect()
}

/// A root datum together with a coefficient field.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Ring {
    inner: Arc<CoreRing>,
}

impl Ring {
    fn d(&self) -> &RootDatum {
        &self.inner.d
    }

    fn alcove(&self, coords: &[i64]) -> PyResult<Alcove> {
        if coords.len() != self.d().npos {
            return Err(PyValueError::new_err(format!("expected {} coordinates", self.d().npos)));
        }
        self.d().from_coords(coords).map_err(err)
    }

    fn word(&self, w: &str) -> PyResult<Vec<FaceType>> {
        self.d().parse_word(w).map_err(err)
    }

    fn char_rows(&self, c: &CharObj) -> PyResult<Vec<(Vec<i64>, Vec<(i32, i64)>)>> {
        let mut support = c.support();
        self.d().sort_by_length(&mut support);
        support.iter().map(|a| Ok((self.d().coords(a), laurent(&c.get(a))?))).collect()
    }
}

#[pymethods]
impl Ring {
    /// `Ring("A2", p=0)`; fails when `p` violates the GKM condition.
    #[new]
    #[pyo3(signature = (datum, p = 0))]
    pub fn new(datum: &str, p: u64) -> PyResult<Ring> {
        let n = DatumName::parse(datum).map_err(err)?;
        let inner = CoreRing::new(RootDatum::build(n), Field::new(p)).map_err(err)?;
        Ok(Ring { inner: Arc::new(inner) })
    }

    #[getter]
    pub fn datum(&self) -> String {
        self.d().name.to_string()
    }

    #[getter]
    pub fn p(&self) -> u64 {
        self.inner.f.p
    }

    #[getter]
    pub fn rank(&self) -> usize {
        self.d().rank
    }

    #[getter]
    pub fn positive_roots(&self) -> usize {
        self.d().npos
    }

    #[getter]
    pub fn faces(&self) -> Vec<String> {
        self.d().faces().iter().map(|f| f.name.clone()).collect()
    }

    pub fn fundamental(&self) -> Vec<i64> {
        self.d().coords(&self.d().fund())
    }

    pub fn leq(&self, a: Vec<i64>, b: Vec<i64>) -> PyResult<bool> {
        Ok(self.d().leq(&self.alcove(&a)?, &self.alcove(&b)?))
    }

    pub fn dist(&self, a: Vec<i64>, b: Vec<i64>) -> PyResult<i64> {
        Ok(self.d().dist(&self.alcove(&a)?, &self.alcove(&b)?))
    }

    pub fn length(&self, a: Vec<i64>) -> PyResult<i64> {
        Ok(self.d().length(&self.alcove(&a)?))
    }

    pub fn up(&self, root: usize, a: Vec<i64>) -> PyResult<Vec<i64>> {
        self.check_root(root)?;
        Ok(self.d().coords(&self.d().up(root, &self.alcove(&a)?)))
    }

    pub fn down(&self, root: usize, a: Vec<i64>) -> PyResult<Vec<i64>> {
        self.check_root(root)?;
        Ok(self.d().coords(&self.d().down(root, &self.alcove(&a)?)))
    }

    pub fn right_act(&self, a: Vec<i64>, word: &str) -> PyResult<Vec<i64>> {
        Ok(self.d().coords(&self.d().right_act_word(&self.alcove(&a)?, &self.word(word)?)))
    }

    pub fn box_of(&self, a: Vec<i64>) -> PyResult<Vec<i64>> {
        Ok(self.d().box_of(&self.alcove(&a)?))
    }

    pub fn orbit(&self, weight: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
        Ok(self.d().wlambda_orbit(&weight).map_err(err)?.iter().map(|a| self.d().coords(a)).collect())
    }

    /// Graded ranks of `Q_lambda * B_s1 * ... * B_sl`, predicted by the character recursion.
    #[pyo3(signature = (weight, word = ""))]
    pub fn character(&self, weight: Vec<i64>, word: &str) -> PyResult<Vec<(Vec<i64>, Vec<(i32, i64)>)>> {
        let c = bott_samelson_char(self.d(), &weight, &self.word(word)?, 0).map_err(err)?;
        self.char_rows(&c)
    }

    #[pyo3(signature = (weight, word = ""))]
    pub fn bott_samelson(&self, weight: Vec<i64>, word: &str) -> PyResult<KObject> {
        let m = bott_samelson(&self.inner, &weight, &self.word(word)?).map_err(err)?;
        Ok(KObject { ring: self.clone(), inner: m })
    }

    /// Rows `Q(A)`, columns `A'`, entries the rank of `Q(A)` at `A'`, over the ball of the given radius.
    pub fn mult_table(&self, radius: usize) -> PyResult<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
        let mut region = self.d().ball(radius);
        self.d().sort_by_length(&mut region);
        let t = multiplicity_table(&self.inner, &region, &SplitOptions::default()).map_err(err)?;
        Ok((region.iter().map(|a| self.d().coords(a)).collect(), t))
    }

    /// Runs a verification suite; returns `(passed, cases, witness)`.
    #[pyo3(signature = (suite, dmax = 6, radius = 2, seed = 0))]
    pub fn verify(&self, suite: &str, dmax: i32, radius: usize, seed: u64) -> PyResult<(bool, usize, Option<String>)> {
        let r = run_suite(&self.inner, suite, &VerifyConfig { dmax, radius, seed }).map_err(err)?;
        Ok((r.passed, r.cases, r.witness))
    }

    #[staticmethod]
    pub fn suites() -> Vec<&'static str> {
        SUITES.to_vec()
    }

    pub fn __repr__(&self) -> String {
        format!("Ring({:?}, p={})", self.datum(), self.p())
    }
}

impl Ring {
    fn check_root(&self, root: usize) -> PyResult<()> {
        if root >= self.d().npos {
            return Err(PyValueError::new_err(format!("root index must be below {}", self.d().npos)));
        }
        Ok(())
    }
}

/// A graded object with generic decomposition over alcoves.
#[pyclass(frozen)]
pub struct KObject {
    ring: Ring,
    inner: KObj,
}

impl KObject {
    fn same_ring(&self, other: &KObject) -> PyResult<()> {
        let (a, b) = (&self.ring.inner, &other.ring.inner);
        if a.d.name != b.d.name || a.f.p != b.f.p {
            return Err(PyValueError::new_err("objects live over different rings"));
        }
        Ok(())
    }
}

#[pymethods]
impl KObject {
    #[getter]
    pub fn num_generators(&self) -> usize {
        self.inner.num_gens()
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        let d = self.ring.d();
        let mut v = self.inner.alcoves();
        d.sort_by_length(&mut v);
        v.iter().map(|a| d.coords(a)).collect()
    }

    /// Graded ranks of the stalks, computed from the object itself.
    pub fn character(&self) -> PyResult<Vec<(Vec<i64>, Vec<(i32, i64)>)>> {
        let c = engine_char(&self.ring.inner, &self.inner).map_err(err)?;
        self.ring.char_rows(&c)
    }

    pub fn star_bs(&self, face: &str) -> PyResult<KObject> {
        let s = self.ring.d().face_by_name(face).map_err(err)?;
        Ok(KObject { ring: self.ring.clone(), inner: star_bs(&self.ring.inner, &self.inner, s) })
    }

    pub fn shift(&self, n: i32) -> KObject {
        KObject { ring: self.ring.clone(), inner: self.inner.shift(n) }
    }

    pub fn direct_sum(&self, other: &KObject) -> PyResult<KObject> {
        self.same_ring(other)?;
        Ok(KObject { ring: self.ring.clone(), inner: self.inner.direct_sum(&other.inner) })
    }

    /// `dim Hom(self, other(d))`.
    pub fn hom_dim(&self, other: &KObject, d: i32) -> PyResult<usize> {
        self.same_ring(other)?;
        let r = &self.ring.inner;
        Ok(hom_dim(r, &prepare(r, &self.inner).map_err(err)?, &prepare(r, &other.inner).map_err(err)?, d))
    }

    /// Dimension of the degree-zero endomorphisms modulo the radical.
    pub fn semisimple_dim(&self) -> PyResult<usize> {
        let r = &self.ring.inner;
        EndAlgebra::new(r, &self.inner).and_then(|a| a.semisimple_dim(r)).map_err(err)
    }

    /// Indecomposable summands `Q(A)(n)` as `(coords of A, n)`, sorted.
    #[pyo3(signature = (seed = None))]
    pub fn decompose(&self, seed: Option<u64>) -> PyResult<Vec<(Vec<i64>, i32)>> {
        let r = &self.ring.inner;
        let opts = SplitOptions { seed: seed.unwrap_or(SplitOptions::default().seed), ..Default::default() };
        let mut out = vec![];
        for p in split(r, &self.inner, &opts).map_err(err)? {
            let (a, n) = identify(r, &p).map_err(err)?;
            out.push((r.d.length(&a), r.d.coords(&a), n));
        }
        out.sort();
        Ok(out.into_iter().map(|(_, k, n)| (k, n)).collect())
    }

    /// Status per gluing property: `"pass"`, `"fail: ..."` or `"skipped: ..."`.
    pub fn validate(&self) -> Vec<(String, String)> {
        validate(&self.ring.inner, &self.inner)
            .checks
            .iter()
            .map(|c| {
                let s = match &c.status {
                    Status::Pass => "pass".to_string(),
                    Status::Fail(w) => format!("fail: {w}"),
                    Status::Skipped(w) => format!("skipped: {w}"),
                };
                (c.property.name().to_string(), s)
            })
            .collect()
    }

    /// `None` when the wall-crossing square commutes for `face`, else a witness.
    pub fn check_compatibility(&self, face: &str) -> PyResult<Option<String>> {
        let s = self.ring.d().face_by_name(face).map_err(err)?;
        kcat::ajs::check_compatibility(&self.ring.inner, &self.inner, s).map_err(err)
    }

    pub fn to_json(&self) -> String {
        self.inner.to_json(&self.ring.inner).to_string()
    }

    pub fn __repr__(&self) -> String {
        format!("KObject({} generators on {} alcoves)", self.inner.num_gens(), self.inner.alcoves().len())
    }
}

#[pymodule]
fn kcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<KObject>()?;
    Ok(())
}
