use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rayforge::attacks::{self, AttackOutcome, RayConfig, RayDirection, RayMode, WitnessValue};
use rayforge::numtheory as nt;
use rayforge::rsa;

fn err(e: rayforge::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn outcome_to_dict<'py>(py: Python<'py>, outcome: &AttackOutcome) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("success", outcome.success)?;
    dict.set_item("recovered", outcome.recovered.clone())?;
    let witness = PyDict::new(py);
    for (key, value) in &outcome.witness {
        match value {
            WitnessValue::Nat(v) => witness.set_item(key, v.clone())?,
            WitnessValue::Int(v) => witness.set_item(key, v.clone())?,
            WitnessValue::Nats(vs) => witness.set_item(key, vs.clone())?,
            WitnessValue::Text(s) => witness.set_item(key, s)?,
        }
    }
    dict.set_item("witness", witness)?;
    let work = PyDict::new(py);
    work.set_item("iterations", outcome.work.iterations)?;
    work.set_item("windows", outcome.work.windows)?;
    work.set_item("mod_muls", outcome.work.mod_muls)?;
    dict.set_item("work", work)?;
    Ok(dict)
}

#[pyfunction]
fn ext_euclid(a: BigUint, b: BigUint) -> PyResult<(BigUint, num_bigint::BigInt, num_bigint::BigInt)> {
    let r = nt::ext_euclid(&a, &b).map_err(err)?;
    Ok((r.g, r.x0, r.x1))
}

#[pyfunction]
fn mod_pow(base: BigUint, exp: BigUint, n: BigUint) -> PyResult<BigUint> {
    nt::mod_pow(&base, &exp, &n).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, n, strategy = "euclid"))]
fn mod_inv(a: BigUint, n: BigUint, strategy: &str) -> PyResult<BigUint> {
    let strategy = match strategy {
        "euclid" => nt::InverseStrategy::Euclid,
        "lambda_power" => nt::InverseStrategy::LambdaPower,
        other => return Err(PyValueError::new_err(format!("unknown strategy '{other}'"))),
    };
    nt::mod_inv(&a, &n, strategy).map_err(err)
}

#[pyfunction]
fn factorize(n: BigUint) -> PyResult<Vec<(BigUint, u32)>> {
    Ok(nt::factorize(&n).map_err(err)?.factors().to_vec())
}

#[pyfunction]
fn euler_phi(n: BigUint) -> PyResult<BigUint> {
    nt::euler_phi(&n).map_err(err)
}

#[pyfunction]
fn carmichael_lambda(n: BigUint) -> PyResult<BigUint> {
    nt::carmichael_lambda(&n).map_err(err)
}

#[pyfunction]
fn omega(m: BigUint, n: BigUint) -> PyResult<BigUint> {
    nt::omega(&m, &n).map_err(err)
}

#[pyfunction]
fn omega_tower(m: BigUint, n: BigUint, depth: u64) -> PyResult<Vec<BigUint>> {
    nt::omega_tower(&m, &n, depth).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, e, m, max_steps = 1_000_000))]
fn iteration_exponent(n: BigUint, e: BigUint, m: BigUint, max_steps: u64) -> PyResult<BigUint> {
    nt::iteration_exponent(&n, &e, &m, max_steps).map_err(err)
}

#[pyfunction]
fn is_prime(n: BigUint) -> bool {
    nt::is_prime(&n)
}

#[pyfunction]
fn next_prime(n: BigUint) -> BigUint {
    nt::next_prime(&n)
}

#[pyfunction]
fn gen_prime(bits: u32, seed: u64) -> PyResult<BigUint> {
    nt::gen_prime(bits, seed).map_err(err)
}

#[pyfunction]
fn is_doubly_safe(p: BigUint) -> bool {
    nt::is_doubly_safe(&p)
}

#[pyfunction]
fn gen_doubly_safe_prime(bits: u32, seed: u64) -> PyResult<BigUint> {
    nt::gen_doubly_safe_prime(bits, seed).map_err(err)
}

#[pyfunction]
fn integer_kth_root(x: BigUint, k: u64) -> PyResult<(BigUint, bool)> {
    nt::integer_kth_root(&x, k).map_err(err)
}

#[pyfunction]
fn crt(residues: Vec<BigUint>, moduli: Vec<BigUint>) -> PyResult<BigUint> {
    nt::crt(&residues, &moduli).map_err(err)
}

/// A validated RSA key system (e, d, p, q).
#[pyclass]
#[derive(Clone)]
struct KeySystem {
    inner: rsa::KeySystem,
}

#[pymethods]
impl KeySystem {
    #[new]
    fn new(e: BigUint, d: BigUint, p: BigUint, q: BigUint) -> PyResult<Self> {
        Ok(Self { inner: rsa::KeySystem::new(e, d, p, q).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (bits, seed = 0, doubly_safe = false, fixed_e = None))]
    fn generate(bits: u32, seed: u64, doubly_safe: bool, fixed_e: Option<BigUint>) -> PyResult<Self> {
        let options = rsa::KeygenOptions { doubly_safe, fixed_e };
        Ok(Self { inner: rsa::keygen(bits, seed, &options).map_err(err)? })
    }

    #[getter]
    fn e(&self) -> BigUint {
        self.inner.e().clone()
    }
    #[getter]
    fn d(&self) -> BigUint {
        self.inner.d().clone()
    }
    #[getter]
    fn p(&self) -> BigUint {
        self.inner.p().clone()
    }
    #[getter]
    fn q(&self) -> BigUint {
        self.inner.q().clone()
    }
    #[getter]
    fn n(&self) -> BigUint {
        self.inner.n().clone()
    }
    #[getter]
    fn lambda_n(&self) -> BigUint {
        self.inner.lambda_n().clone()
    }

    fn encrypt(&self, m: BigUint) -> PyResult<BigUint> {
        rsa::encrypt(&self.inner.public_key(), &m).map_err(err)
    }

    fn decrypt(&self, c: BigUint) -> PyResult<BigUint> {
        rsa::decrypt(&self.inner.private_key(), &c).map_err(err)
    }

    fn sign(&self, m: BigUint) -> PyResult<BigUint> {
        rsa::sign(&self.inner.private_key(), &m).map_err(err)
    }

    fn verify(&self, m: BigUint, sig: BigUint) -> PyResult<bool> {
        rsa::verify(&self.inner.public_key(), &m, &sig).map_err(err)
    }

    fn key_file(&self) -> String {
        rsa::write_key(&rsa::KeyMaterial::System(self.inner.clone()))
    }

    fn __repr__(&self) -> String {
        format!(
            "KeySystem(e={}, d={}, p={}, q={})",
            self.inner.e(),
            self.inner.d(),
            self.inner.p(),
            self.inner.q()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, max_steps = 1_000_000))]
fn fermat_factor(py: Python<'_>, n: BigUint, max_steps: u64) -> PyResult<Py<PyDict>> {
    let outcome = attacks::fermat_factor(&n, max_steps).map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pyfunction]
#[pyo3(signature = (e, n, c, max_steps = 1_000_000))]
fn iteration_attack(py: Python<'_>, e: BigUint, n: BigUint, c: BigUint, max_steps: u64) -> PyResult<Py<PyDict>> {
    let pk = rsa::PublicKey { e, n };
    let outcome = attacks::iteration_attack(&pk, &c, max_steps).map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pyfunction]
fn common_modulus_attack(
    py: Python<'_>,
    e1: BigUint,
    e2: BigUint,
    n: BigUint,
    c1: BigUint,
    c2: BigUint,
) -> PyResult<Py<PyDict>> {
    let outcome = attacks::common_modulus_attack(&e1, &e2, &n, &c1, &c2).map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pyfunction]
fn broadcast_attack(py: Python<'_>, e: BigUint, pairs: Vec<(BigUint, BigUint)>) -> PyResult<Py<PyDict>> {
    let keys: Vec<(BigUint, BigUint)> =
        pairs.iter().map(|(n, _)| (e.clone(), n.clone())).collect();
    let cts: Vec<BigUint> = pairs.into_iter().map(|(_, c)| c).collect();
    let outcome = attacks::broadcast_attack(&keys, &cts).map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pyfunction]
#[pyo3(signature = (e, n, a = None, b = None, seed = 0))]
fn direct_omega_attack(
    py: Python<'_>,
    e: BigUint,
    n: BigUint,
    a: Option<BigUint>,
    b: Option<BigUint>,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let one = BigUint::from(1u32);
    let outcome = attacks::direct_omega_attack(
        &e,
        &n,
        a.as_ref().unwrap_or(&one),
        b.as_ref().unwrap_or(&one),
        seed,
    )
    .map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pyfunction]
fn ray_bounds(e: BigUint, p: BigUint, q: BigUint) -> PyResult<(u64, BigUint, f64, f64)> {
    let b = attacks::ray_bounds(&e, &p, &q).map_err(err)?;
    Ok((b.delta, b.big_delta.clone(), b.r_minus, b.r_plus))
}

#[pyfunction]
fn phi_from_ray(py: Python<'_>, e: BigUint, n: BigUint, r: BigUint) -> PyResult<Py<PyDict>> {
    let outcome = attacks::phi_from_ray(&e, &n, &r).map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pyfunction]
fn phi_to_private(n: BigUint, phi: BigUint, e: BigUint) -> PyResult<(BigUint, BigUint, BigUint)> {
    attacks::phi_to_private(&n, &phi, &e).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (e, n, r = None, step = None, mode = "order", max_windows = 1_000_000, seed = 0))]
fn ray_attack(
    py: Python<'_>,
    e: BigUint,
    n: BigUint,
    r: Option<BigUint>,
    step: Option<BigUint>,
    mode: &str,
    max_windows: u64,
    seed: u64,
) -> PyResult<Py<PyDict>> {
    let mode = match mode {
        "order" => RayMode::OrderMultiple,
        "phi" => RayMode::PhiRecovery,
        other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
    };
    let cfg = RayConfig {
        r_start: r,
        step,
        direction: RayDirection::Down,
        max_windows,
        mode,
        probe_seed: seed,
    };
    let outcome = attacks::ray_attack(&e, &n, &cfg).map_err(err)?;
    Ok(outcome_to_dict(py, &outcome)?.into())
}

#[pymodule]
fn rayforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<KeySystem>()?;
    m.add_function(wrap_pyfunction!(ext_euclid, m)?)?;
    m.add_function(wrap_pyfunction!(mod_pow, m)?)?;
    m.add_function(wrap_pyfunction!(mod_inv, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(euler_phi, m)?)?;
    m.add_function(wrap_pyfunction!(carmichael_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(omega_tower, m)?)?;
    m.add_function(wrap_pyfunction!(iteration_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(is_prime, m)?)?;
    m.add_function(wrap_pyfunction!(next_prime, m)?)?;
    m.add_function(wrap_pyfunction!(gen_prime, m)?)?;
    m.add_function(wrap_pyfunction!(is_doubly_safe, m)?)?;
    m.add_function(wrap_pyfunction!(gen_doubly_safe_prime, m)?)?;
    m.add_function(wrap_pyfunction!(integer_kth_root, m)?)?;
    m.add_function(wrap_pyfunction!(crt, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_factor, m)?)?;
    m.add_function(wrap_pyfunction!(iteration_attack, m)?)?;
    m.add_function(wrap_pyfunction!(common_modulus_attack, m)?)?;
    m.add_function(wrap_pyfunction!(broadcast_attack, m)?)?;
    m.add_function(wrap_pyfunction!(direct_omega_attack, m)?)?;
    m.add_function(wrap_pyfunction!(ray_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(phi_from_ray, m)?)?;
    m.add_function(wrap_pyfunction!(phi_to_private, m)?)?;
    m.add_function(wrap_pyfunction!(ray_attack, m)?)?;
    Ok(())
}
