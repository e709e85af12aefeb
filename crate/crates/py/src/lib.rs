//! Python bindings: the `Matrix` type plus the main decision procedures.
//! Rationals cross the boundary as strings ("3", "-7/2"); larger reports
//! are returned either as dicts or as the same JSON documents the CLI
//! emits.

use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use liekolchin::comb;
use liekolchin::exact::Rat;
use liekolchin::index;
use liekolchin::matrix::{MatQ, MinorSpec};
use liekolchin::pipeline;
use liekolchin::tracepoly;
use liekolchin::unipotent;

fn to_py_err(e: liekolchin::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[derive(FromPyObject)]
enum RatInput {
    Int(i64),
    Str(String),
}

impl RatInput {
    fn into_rat(self) -> PyResult<Rat> {
        match self {
            RatInput::Int(v) => Ok(Rat::from(v)),
            RatInput::Str(s) => Rat::from_str(&s).map_err(to_py_err),
        }
    }
}

fn rats(values: Vec<RatInput>) -> PyResult<Vec<Rat>> {
    values.into_iter().map(RatInput::into_rat).collect()
}

fn strings(values: &[Rat]) -> Vec<String> {
    values.iter().map(Rat::to_string).collect()
}

/// A square matrix of exact rationals.
#[pyclass(eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct Matrix {
    inner: MatQ,
}

#[pymethods]
impl Matrix {
    /// Build from rows of integers or rational strings.
    #[new]
    fn new(entries: Vec<Vec<RatInput>>) -> PyResult<Self> {
        let rows = entries
            .into_iter()
            .map(rats)
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Matrix {
            inner: MatQ::from_rows(rows).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn identity(dim: usize) -> PyResult<Self> {
        if dim == 0 {
            return Err(to_py_err(liekolchin::Error::EmptyMatrix));
        }
        Ok(Matrix {
            inner: MatQ::identity(dim),
        })
    }

    #[staticmethod]
    fn zero(dim: usize) -> PyResult<Self> {
        if dim == 0 {
            return Err(to_py_err(liekolchin::Error::EmptyMatrix));
        }
        Ok(Matrix {
            inner: MatQ::zero(dim),
        })
    }

    /// The canonical unipotent single Jordan block I + N.
    #[staticmethod]
    fn unipotent_block(dim: usize) -> PyResult<Self> {
        if dim == 0 {
            return Err(to_py_err(liekolchin::Error::EmptyMatrix));
        }
        Ok(Matrix {
            inner: MatQ::unipotent_block(dim),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Matrix {
            inner: serde_json::from_str(text)
                .map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("matrix serialization")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn entries(&self) -> Vec<Vec<String>> {
        self.inner.rows().iter().map(|row| strings(row)).collect()
    }

    fn det(&self) -> String {
        self.inner.det().to_string()
    }

    fn trace(&self) -> String {
        self.inner.trace().to_string()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    /// Coefficients of the characteristic polynomial, constant term first.
    fn char_poly(&self) -> Vec<String> {
        strings(self.inner.char_poly().coeffs())
    }

    fn kernel_basis(&self) -> Vec<Vec<String>> {
        self.inner
            .kernel_basis()
            .iter()
            .map(|v| strings(v))
            .collect()
    }

    fn mul(&self, other: &Matrix) -> PyResult<Matrix> {
        Ok(Matrix {
            inner: self.inner.mat_mul(&other.inner).map_err(to_py_err)?,
        })
    }

    fn __matmul__(&self, other: &Matrix) -> PyResult<Matrix> {
        self.mul(other)
    }

    fn pow(&self, k: u64) -> Matrix {
        Matrix {
            inner: self.inner.mat_pow(k),
        }
    }

    fn inverse(&self) -> PyResult<Matrix> {
        Ok(Matrix {
            inner: self.inner.inverse().map_err(to_py_err)?,
        })
    }

    /// Matrix index as an integer, or None for the zero matrix.
    fn index(&self) -> Option<i64> {
        index::index_of(&self.inner).as_int()
    }

    fn is_upper_triangular(&self) -> bool {
        index::is_upper_triangular(&self.inner)
    }

    fn is_unipotent(&self) -> bool {
        unipotent::is_unipotent(&self.inner)
    }

    fn minor_det(&self, rows: Vec<usize>, cols: Vec<usize>) -> PyResult<String> {
        let spec = MinorSpec::new(rows, cols).map_err(to_py_err)?;
        Ok(self.inner.minor_det(&spec).map_err(to_py_err)?.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.entries())
    }
}

/// Quasi-unipotence report as a dict with keys `is_quasi_unipotent`,
/// `unipotent_order`, and `witness_factor` (coefficient strings).
#[pyfunction]
fn is_quasi_unipotent<'py>(py: Python<'py>, m: &Matrix) -> PyResult<Bound<'py, PyDict>> {
    let report = unipotent::is_quasi_unipotent(&m.inner);
    let dict = PyDict::new(py);
    dict.set_item("is_quasi_unipotent", report.is_quasi_unipotent)?;
    dict.set_item("unipotent_order", report.unipotent_order)?;
    dict.set_item(
        "witness_factor",
        report.witness_factor.map(|w| strings(w.coeffs())),
    )?;
    Ok(dict)
}

/// Eigenvalue of a single Jordan block over the rationals ("1" or "-1"),
/// or None if the matrix is not a single block.
#[pyfunction]
fn single_jordan_block_eigenvalue(b: &Matrix) -> Option<String> {
    unipotent::single_jordan_block_eigenvalue(&b.inner).map(|v| v.to_string())
}

#[pyfunction]
fn jordan_basis_single_block(b: &Matrix) -> PyResult<Matrix> {
    Ok(Matrix {
        inner: unipotent::jordan_basis_single_block(&b.inner).map_err(to_py_err)?,
    })
}

/// Coefficients of tr((A B^n)^k) as a polynomial in n, constant first.
#[pyfunction]
fn expand_trace_poly(a: &Matrix, b: &Matrix, k: u32) -> PyResult<Vec<String>> {
    let tp = tracepoly::expand_trace_poly(&a.inner, &b.inner, k).map_err(to_py_err)?;
    Ok(strings(tp.poly.coeffs()))
}

/// Interpolation oracle for the same polynomial.
#[pyfunction]
fn trace_poly_interpolated(a: &Matrix, b: &Matrix, k: u32) -> PyResult<Vec<String>> {
    let tp = tracepoly::trace_poly_interpolated(&a.inner, &b.inner, k).map_err(to_py_err)?;
    Ok(strings(tp.poly.coeffs()))
}

/// Decide trace constancy; dict with `verdict`, `checked_k`, `witness`.
#[pyfunction]
fn hypothesis_verifier<'py>(
    py: Python<'py>,
    a: &Matrix,
    b: &Matrix,
) -> PyResult<Bound<'py, PyDict>> {
    let report = tracepoly::hypothesis_verifier(&a.inner, &b.inner).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("verdict", report.verdict)?;
    dict.set_item("checked_k", report.checked_k)?;
    match report.witness {
        None => dict.set_item("witness", py.None())?,
        Some(w) => {
            let witness = PyDict::new(py);
            witness.set_item("k", w.k)?;
            witness.set_item("n1", w.n1)?;
            witness.set_item("n2", w.n2)?;
            witness.set_item("t1", w.t1.to_string())?;
            witness.set_item("t2", w.t2.to_string())?;
            dict.set_item("witness", witness)?;
        }
    }
    Ok(dict)
}

/// Evidence-mode scan: is A B^n quasi-unipotent for every n <= nmax?
#[pyfunction]
fn sampled_qu_family_check(a: &Matrix, b: &Matrix, nmax: u64) -> PyResult<bool> {
    tracepoly::sampled_qu_family_check(&a.inner, &b.inner, nmax).map_err(to_py_err)
}

/// Full pipeline; returns the same JSON document the CLI `verify` command
/// writes (fields `a`, `b`, `verdict`).
#[pyfunction]
fn verify_main_theorem(a: &Matrix, b: &Matrix) -> PyResult<String> {
    let verdict = pipeline::verify_main_theorem(&a.inner, &b.inner).map_err(to_py_err)?;
    let doc = serde_json::json!({
        "a": a.inner,
        "b": b.inner,
        "verdict": verdict,
    });
    Ok(doc.to_string())
}

/// Common eigenvector of a certified pair, normalized to leading entry 1.
#[pyfunction]
fn common_eigenvector(a: &Matrix, b: &Matrix) -> PyResult<Vec<String>> {
    Ok(strings(
        &pipeline::common_eigenvector(&a.inner, &b.inner).map_err(to_py_err)?,
    ))
}

/// Least (k, n) with tr((A B^n)^k) != tr(A^k), as
/// (k, n, trace_base, trace_at_n), or None.
#[pyfunction]
fn counterexample_search(
    a: &Matrix,
    b: &Matrix,
    kmax: u32,
    nmax: u64,
) -> PyResult<Option<(u32, u64, String, String)>> {
    let witness =
        pipeline::counterexample_search(&a.inner, &b.inner, kmax, nmax).map_err(to_py_err)?;
    Ok(witness.map(|w| {
        (
            w.k,
            w.n,
            w.trace_base.to_string(),
            w.trace_at_n.to_string(),
        )
    }))
}

/// Commutator criterion; preconditions raise ValueError.
#[pyfunction]
fn commutator_qu_check(
    py: Python<'_>,
    g: &Matrix,
    xs: Vec<Py<Matrix>>,
    ys: Vec<Py<Matrix>>,
) -> PyResult<bool> {
    let xs: Vec<MatQ> = xs.iter().map(|m| m.borrow(py).inner.clone()).collect();
    let ys: Vec<MatQ> = ys.iter().map(|m| m.borrow(py).inner.clone()).collect();
    pipeline::commutator_qu_check(&g.inner, &xs, &ys).map_err(to_py_err)
}

/// The cyclic polynomial p_k evaluated on (r, m, x).
#[pyfunction]
fn pk_direct(r: usize, m: usize, x: Vec<RatInput>, k: u32) -> PyResult<String> {
    let inst = comb::PkInstance::new(r, m, rats(x)?).map_err(to_py_err)?;
    Ok(comb::pk_direct(&inst, k).map_err(to_py_err)?.to_string())
}

/// The same value through the trace reformulation tr((diag(x) B)^k).
#[pyfunction]
fn pk_via_trace(r: usize, m: usize, x: Vec<RatInput>, k: u32) -> PyResult<String> {
    let inst = comb::PkInstance::new(r, m, rats(x)?).map_err(to_py_err)?;
    Ok(comb::pk_via_trace(&inst, k)
        .map_err(to_py_err)?
        .to_string())
}

/// Least k <= m+1 with p_k != 0 for nonzero x: (all_zero, witness_k).
#[pyfunction]
fn theorem_pk_check(r: usize, m: usize, x: Vec<RatInput>) -> PyResult<(bool, Option<u32>)> {
    let inst = comb::PkInstance::new(r, m, rats(x)?).map_err(to_py_err)?;
    comb::theorem_pk_check(&inst).map_err(to_py_err)
}

/// The inverse-factorial matrix with entries 1/(i-j+r)!.
#[pyfunction]
fn mat_b(r: usize, m: usize) -> Matrix {
    Matrix {
        inner: comb::mat_b(r, m),
    }
}

/// The binomial matrix with entries C(i+r, j).
#[pyfunction]
fn mat_m(r: usize, m: usize) -> Matrix {
    Matrix {
        inner: comb::mat_m(r, m),
    }
}

/// The n-by-n lower triangular Pascal matrix.
#[pyfunction]
fn pascal(n: usize) -> PyResult<Matrix> {
    if n == 0 {
        return Err(to_py_err(liekolchin::Error::EmptyMatrix));
    }
    Ok(Matrix {
        inner: comb::pascal_l(n),
    })
}

/// Elementary bidiagonal factors whose ordered product is pascal(n).
#[pyfunction]
fn bidiagonal_factorization(n: usize) -> PyResult<Vec<Matrix>> {
    if n == 0 {
        return Err(to_py_err(liekolchin::Error::EmptyMatrix));
    }
    Ok(comb::bidiagonal_factorization(n)
        .into_iter()
        .map(|inner| Matrix { inner })
        .collect())
}

/// Exhaustive minor scan: (is_tnn, offending (rows, cols) or None).
#[pyfunction]
#[pyo3(signature = (m, cap=None))]
fn is_totally_nonnegative(
    m: &Matrix,
    cap: Option<usize>,
) -> PyResult<(bool, Option<(Vec<usize>, Vec<usize>)>)> {
    let (ok, offending) = comb::is_totally_nonnegative(&m.inner, cap).map_err(to_py_err)?;
    Ok((
        ok,
        offending.map(|s| (s.rows().to_vec(), s.cols().to_vec())),
    ))
}

/// Cauchy-Binet identity check for the minor (rows, cols) of A B.
#[pyfunction]
fn cauchy_binet_check(
    a: &Matrix,
    b: &Matrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
) -> PyResult<bool> {
    let spec = MinorSpec::new(rows, cols).map_err(to_py_err)?;
    comb::cauchy_binet_check(&a.inner, &b.inner, &spec).map_err(to_py_err)
}

/// Positive binomial minor with its chain: dict with `det`, `n`, `chain`.
#[pyfunction]
fn minor_positivity<'py>(
    py: Python<'py>,
    qs: Vec<usize>,
    r: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (det, cert) = comb::minor_positivity(&qs, r).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("det", det.to_string())?;
    dict.set_item("n", cert.n)?;
    dict.set_item("chain", cert.chain)?;
    Ok(dict)
}

/// Trace of an index-balanced product via the single-sum formula.
#[pyfunction]
fn product_trace_formula(py: Python<'_>, mats: Vec<Py<Matrix>>) -> PyResult<String> {
    let mats: Vec<MatQ> = mats.iter().map(|m| m.borrow(py).inner.clone()).collect();
    Ok(index::product_trace_formula(&mats)
        .map_err(to_py_err)?
        .to_string())
}

#[pymodule]
fn liekolchin_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_function(wrap_pyfunction!(is_quasi_unipotent, m)?)?;
    m.add_function(wrap_pyfunction!(single_jordan_block_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(jordan_basis_single_block, m)?)?;
    m.add_function(wrap_pyfunction!(expand_trace_poly, m)?)?;
    m.add_function(wrap_pyfunction!(trace_poly_interpolated, m)?)?;
    m.add_function(wrap_pyfunction!(hypothesis_verifier, m)?)?;
    m.add_function(wrap_pyfunction!(sampled_qu_family_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_main_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(common_eigenvector, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_search, m)?)?;
    m.add_function(wrap_pyfunction!(commutator_qu_check, m)?)?;
    m.add_function(wrap_pyfunction!(pk_direct, m)?)?;
    m.add_function(wrap_pyfunction!(pk_via_trace, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_pk_check, m)?)?;
    m.add_function(wrap_pyfunction!(mat_b, m)?)?;
    m.add_function(wrap_pyfunction!(mat_m, m)?)?;
    m.add_function(wrap_pyfunction!(pascal, m)?)?;
    m.add_function(wrap_pyfunction!(bidiagonal_factorization, m)?)?;
    m.add_function(wrap_pyfunction!(is_totally_nonnegative, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_binet_check, m)?)?;
    m.add_function(wrap_pyfunction!(minor_positivity, m)?)?;
    m.add_function(wrap_pyfunction!(product_trace_formula, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
