//! Python bindings: `bwr_py.Game`, `solve`, `oracle`, `solve_ergodic` and `generate`.

use bwr::decomposition::bwr_solve;
use bwr::error::Error;
use bwr::format::{read_game, write_game, FormatError};
use bwr::instances::GenSpec;
use bwr::oracle::{brute_force_solve, OracleBudget};
use bwr::pump::{solve_ergodic as pump_solve, Ctx, PumpStats};
use bwr::rational::{fmt_rational, parse_rational};
use bwr::{Arc, Owner, Rational, Situation};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

create_exception!(bwr_py, SolverError, PyException, "The solver hit an internal invariant violation.");
create_exception!(bwr_py, NotErgodicError, PyException, "The game has a contra-ergodic partition.");
create_exception!(bwr_py, BudgetExceededError, PyException, "The oracle budget is too small for this game.");

fn solver_err(e: Error) -> PyErr {
    match e {
        Error::Game(g) => PyValueError::new_err(g.to_string()),
        Error::NotErgodic(_) => NotErgodicError::new_err(e.to_string()),
        Error::BudgetExceeded(_) => BudgetExceededError::new_err(e.to_string()),
        other => SolverError::new_err(other.to_string()),
    }
}

fn format_err(e: FormatError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_rational(r),))
}

fn fractions<'py>(py: Python<'py>, values: &[Rational]) -> PyResult<Bound<'py, PyList>> {
    let items = values.iter().map(|v| fraction(py, v)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn owner_of(code: &str) -> PyResult<Owner> {
    match code {
        "W" => Ok(Owner::White),
        "B" => Ok(Owner::Black),
        "R" => Ok(Owner::Random),
        _ => Err(PyValueError::new_err(format!("owner must be 'W', 'B' or 'R', got {code:?}"))),
    }
}

type PyArcTuple<'py> = (usize, usize, Bound<'py, PyAny>, Option<Bound<'py, PyAny>>);

/// A game. Build it from owners and arcs, or read it from the JSON game file format.
#[pyclass(name = "Game", module = "bwr_py", frozen)]
struct PyGame {
    inner: bwr::Game,
}

#[pymethods]
impl PyGame {
    /// `owners` is a list of "W" / "B" / "R"; each arc is `(from, to, reward, prob)` with `prob`
    /// a string such as "1/3" on arcs of random positions and None elsewhere.
    #[new]
    #[pyo3(signature = (owners, arcs, names=None))]
    fn new(owners: Vec<String>, arcs: Vec<(usize, usize, i64, Option<String>)>, names: Option<Vec<String>>) -> PyResult<Self> {
        let owners = owners.iter().map(|o| owner_of(o)).collect::<PyResult<Vec<_>>>()?;
        let names = names.unwrap_or_else(|| (0..owners.len()).map(|i| i.to_string()).collect());
        if names.len() != owners.len() {
            return Err(PyValueError::new_err("names and owners differ in length"));
        }
        let mut out = Vec::with_capacity(arcs.len());
        for (from, to, reward, prob) in arcs {
            let prob = prob.map(|p| parse_rational(&p)).transpose().map_err(|e| PyValueError::new_err(e.to_string()))?;
            out.push(Arc { from, to, reward: reward.into(), prob });
        }
        let inner = bwr::Game::with_names(owners, names, out, 1.into()).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyGame { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGame { inner: read_game(text).map_err(format_err)? })
    }

    fn to_json(&self) -> String {
        write_game(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn owners(&self) -> Vec<&'static str> {
        self.inner.owners().iter().map(|o| o.letter()).collect()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn num_random(&self) -> usize {
        self.inner.num_random()
    }

    /// Arcs as `(from, to, reward, prob)` with rewards in true units and `prob` a Fraction or None.
    fn arcs<'py>(&self, py: Python<'py>) -> PyResult<Vec<PyArcTuple<'py>>> {
        let scale = Rational::from_integer(self.inner.scale().clone());
        self.inner
            .arcs()
            .iter()
            .map(|a| {
                let reward = fraction(py, &(Rational::from_integer(a.reward.clone()) / &scale))?;
                let prob = a.prob.as_ref().map(|p| fraction(py, p)).transpose()?;
                Ok((a.from, a.to, reward, prob))
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Game(n={}, arcs={}, random={})", self.inner.n(), self.inner.arcs().len(), self.inner.num_random())
    }
}

fn choices(s: &Situation) -> Vec<Option<usize>> {
    s.choices().to_vec()
}

fn stats_dict<'py>(py: Python<'py>, stats: &PumpStats) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("pump_runs", stats.runs)?;
    d.set_item("iterations", stats.iterations)?;
    d.set_item("phases", stats.phases)?;
    d.set_item("partitions", stats.partitions)?;
    d.set_item("violations", stats.violations.clone())?;
    Ok(d)
}

/// Solves the game. Returns a dict with `values` (Fractions), `choices` (chosen arc index per
/// position, None at random positions), `certified` and `stats`.
#[pyfunction]
fn solve<'py>(py: Python<'py>, game: &PyGame) -> PyResult<Bound<'py, PyDict>> {
    let g = game.inner.clone();
    let (res, ctx) = py.detach(move || {
        let mut ctx = Ctx::default();
        (bwr_solve(&g, &mut ctx), ctx)
    });
    let sol = res.map_err(solver_err)?;
    let d = PyDict::new(py);
    d.set_item("values", fractions(py, &sol.values)?)?;
    d.set_item("choices", choices(&sol.situation))?;
    d.set_item("certified", sol.certified())?;
    d.set_item("guesses", sol.guesses)?;
    d.set_item("stats", stats_dict(py, &ctx.stats)?)?;
    Ok(d)
}

/// Pumps an ergodic game to its common value; raises NotErgodicError otherwise.
#[pyfunction]
fn solve_ergodic<'py>(py: Python<'py>, game: &PyGame) -> PyResult<Bound<'py, PyDict>> {
    let g = game.inner.clone();
    let (res, ctx) = py.detach(move || {
        let mut ctx = Ctx::default();
        (pump_solve(&g, &mut ctx), ctx)
    });
    let sol = res.map_err(solver_err)?;
    let d = PyDict::new(py);
    d.set_item("value", fraction(py, &sol.value)?)?;
    d.set_item("choices", choices(&sol.situation))?;
    d.set_item("stats", stats_dict(py, &ctx.stats)?)?;
    Ok(d)
}

/// Brute-force solution by enumerating every situation.
#[pyfunction]
#[pyo3(signature = (game, budget=OracleBudget::default().max_situations))]
fn oracle<'py>(py: Python<'py>, game: &PyGame, budget: u64) -> PyResult<Bound<'py, PyDict>> {
    let g = game.inner.clone();
    let sol = py.detach(move || brute_force_solve(&g, OracleBudget { max_situations: budget })).map_err(solver_err)?;
    let d = PyDict::new(py);
    d.set_item("values", fractions(py, &sol.values)?)?;
    d.set_item("choices", choices(&sol.situation))?;
    d.set_item("situations", sol.situations)?;
    Ok(d)
}

/// Generates an instance: `generate("figure1", l=3, d=2)`, `generate("figure2", r=8)`,
/// `generate("random", n=5, k=2, d=2, r=2, max_out=3, seed=0)`,
/// `generate("tripartite", sizes=(2, 2, 2), d=2, r=2, seed=0)`.
#[pyfunction]
#[pyo3(signature = (family, l=None, d=None, r=None, n=None, k=None, max_out=3, sizes=None, seed=0))]
#[allow(clippy::too_many_arguments)]
fn generate(
    family: &str,
    l: Option<usize>,
    d: Option<u64>,
    r: Option<i64>,
    n: Option<usize>,
    k: Option<usize>,
    max_out: usize,
    sizes: Option<[usize; 3]>,
    seed: u64,
) -> PyResult<PyGame> {
    fn need<T>(v: Option<T>, name: &str) -> PyResult<T> {
        v.ok_or_else(|| PyValueError::new_err(format!("missing parameter {name}")))
    }
    let spec = match family {
        "figure1" => GenSpec::Figure1 { l: need(l, "l")?, d: need(d, "d")? },
        "figure2" => GenSpec::Figure2 {
            r: u64::try_from(need(r, "r")?).map_err(|_| PyValueError::new_err("r must be positive"))?,
        },
        "random" => GenSpec::Random { n: need(n, "n")?, k: need(k, "k")?, d: need(d, "d")?, r: need(r, "r")?, max_out, seed },
        "tripartite" => GenSpec::Tripartite { sizes: need(sizes, "sizes")?, d: need(d, "d")?, r: need(r, "r")?, seed },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    let inner = spec.generate().map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(PyGame { inner })
}

#[pymodule]
fn bwr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solve_ergodic, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    m.add("NotErgodicError", m.py().get_type::<NotErgodicError>())?;
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    Ok(())
}
