//! Seeded instance generators and the `kind:key=value,...` spec syntax.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DagInstance, GraphError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    /// One directed path with `k` unit-cost edges.
    Path { k: usize },
    /// `layers` layers of `width` vertices; each edge between consecutive
    /// layers is present with probability `density`. `k` defaults to
    /// `layers - 1`.
    Layered {
        layers: usize,
        width: usize,
        density: f64,
        seed: u64,
        k: Option<usize>,
        costs: CostModel,
    },
    /// Parts of sizes `a` and `b`, all edges directed from the first part.
    Bipartite {
        a: usize,
        b: usize,
        density: f64,
        seed: u64,
        k: Option<usize>,
    },
    /// Each pair `i < j` is an edge `i -> j` with probability `p`.
    Random {
        n: usize,
        p: f64,
        k: usize,
        seed: u64,
        costs: CostModel,
    },
}

/// Edge costs of generated instances; paths always use unit costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    /// Uniform on `[1, 10]`.
    #[default]
    Uniform,
    Unit,
}

impl FromStr for CostModel {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "unit" => Ok(Self::Unit),
            other => Err(GenError::BadParams(format!("costs = `{other}` is not uniform or unit"))),
        }
    }
}

impl CostModel {
    fn suffix(self) -> &'static str {
        match self {
            Self::Uniform => "",
            Self::Unit => ",costs=unit",
        }
    }

    fn draw<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            Self::Uniform => rng.random_range(1.0..=10.0),
            Self::Unit => 1.0,
        }
    }
}

/// A generated instance and, for bipartite kinds, the side of each vertex.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: DagInstance,
    pub bipartition: Option<Vec<bool>>,
}

impl FromStr for GenSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let bad = |m: String| GenError::BadParams(m);
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("`{item}` is not key=value")))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut take = |key: &str| kv.remove(key);
        fn num<T: FromStr>(key: &str, v: Option<String>) -> Result<Option<T>, GenError> {
            v.map(|v| {
                v.parse()
                    .map_err(|_| GenError::BadParams(format!("{key} = `{v}` is not a number")))
            })
            .transpose()
        }
        let need = |key: &str, v: Option<usize>| v.ok_or_else(|| GenError::BadParams(format!("missing {key}")));
        let spec = match kind {
            "path" => GenSpec::Path {
                k: need("k", num("k", take("k"))?)?,
            },
            "layered" => GenSpec::Layered {
                layers: need("L", num("L", take("L"))?)?,
                width: need("width", num("width", take("width"))?)?,
                density: num("density", take("density"))?.unwrap_or(1.0),
                seed: num("seed", take("seed"))?.unwrap_or(0),
                k: num("k", take("k"))?,
                costs: take("costs").map(|c| c.parse()).transpose()?.unwrap_or_default(),
            },
            "bipartite" => GenSpec::Bipartite {
                a: need("a", num("a", take("a"))?)?,
                b: need("b", num("b", take("b"))?)?,
                density: num("density", take("density"))?.unwrap_or(1.0),
                seed: num("seed", take("seed"))?.unwrap_or(0),
                k: num("k", take("k"))?,
            },
            "random" => GenSpec::Random {
                n: need("n", num("n", take("n"))?)?,
                p: num("p", take("p"))?.unwrap_or(0.3),
                k: need("k", num("k", take("k"))?)?,
                seed: num("seed", take("seed"))?.unwrap_or(0),
                costs: take("costs").map(|c| c.parse()).transpose()?.unwrap_or_default(),
            },
            other => return Err(bad(format!("unknown generator `{other}`"))),
        };
        if let Some(key) = kv.keys().next() {
            return Err(bad(format!("unknown key `{key}` for {kind}")));
        }
        Ok(spec)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt_k = |k: &Option<usize>| k.map(|k| format!(",k={k}")).unwrap_or_default();
        match self {
            GenSpec::Path { k } => write!(f, "path:k={k}"),
            GenSpec::Layered {
                layers,
                width,
                density,
                seed,
                k,
                costs,
            } => write!(
                f,
                "layered:L={layers},width={width},density={density},seed={seed}{}{}",
                opt_k(k),
                costs.suffix()
            ),
            GenSpec::Bipartite { a, b, density, seed, k } => {
                write!(f, "bipartite:a={a},b={b},density={density},seed={seed}{}", opt_k(k))
            }
            GenSpec::Random { n, p, k, seed, costs } => {
                write!(f, "random:n={n},p={p},k={k},seed={seed}{}", costs.suffix())
            }
        }
    }
}

fn check_density(d: f64) -> Result<(), GenError> {
    if d > 0.0 && d <= 1.0 {
        Ok(())
    } else {
        Err(GenError::BadParams(format!("density {d} outside (0, 1]")))
    }
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    match *spec {
        GenSpec::Path { k } => {
            if k == 0 {
                return Err(GenError::BadParams("k must be positive".into()));
            }
            let edges = (0..k).map(|i| (i, i + 1, 1.0)).collect();
            Ok(Generated {
                instance: DagInstance::new(k + 1, edges, k)?,
                bipartition: Some((0..=k).map(|v| v % 2 == 1).collect()),
            })
        }
        GenSpec::Layered {
            layers,
            width,
            density,
            seed,
            k,
            costs,
        } => {
            if layers < 2 || width == 0 {
                return Err(GenError::BadParams("need L >= 2 and width >= 1".into()));
            }
            check_density(density)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for layer in 0..layers - 1 {
                for a in 0..width {
                    for b in 0..width {
                        if rng.random::<f64>() < density {
                            edges.push((layer * width + a, (layer + 1) * width + b, costs.draw(&mut rng)));
                        }
                    }
                }
            }
            let n = layers * width;
            Ok(Generated {
                instance: DagInstance::new(n, edges, k.unwrap_or(layers - 1))?,
                bipartition: Some((0..n).map(|v| (v / width) % 2 == 1).collect()),
            })
        }
        GenSpec::Bipartite { a, b, density, seed, k } => {
            if a == 0 || b == 0 {
                return Err(GenError::BadParams("both parts need a vertex".into()));
            }
            check_density(density)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..a {
                for v in 0..b {
                    if rng.random::<f64>() < density {
                        edges.push((u, a + v, CostModel::Uniform.draw(&mut rng)));
                    }
                }
            }
            Ok(Generated {
                instance: DagInstance::new(a + b, edges, k.unwrap_or(1))?,
                bipartition: Some((0..a + b).map(|v| v >= a).collect()),
            })
        }
        GenSpec::Random { n, p, k, seed, costs } => {
            check_density(p)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random::<f64>() < p {
                        edges.push((u, v, costs.draw(&mut rng)));
                    }
                }
            }
            Ok(Generated {
                instance: DagInstance::new(n, edges, k)?,
                bipartition: None,
            })
        }
    }
}
