//! The finite metric space of transportation bases.
//!
//! Two distance providers are supported: great-circle (haversine over WGS84
//! coordinates) and an explicit square matrix in kilometres. Either way the
//! space is immutable once built and every lookup goes through [`BaseIx`].

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Great-circle spaces up to this many bases keep a dense distance table.
const DENSE_CACHE_MAX: usize = 4096;

/// Pair checks are exhaustive up to this many bases and sampled above it.
const EXHAUSTIVE_PAIR_MAX: usize = 1000;

/// Dense handle of a base inside one [`MetricSpace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseIx(pub u32);

impl BaseIx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Position {
    /// WGS84 decimal degrees.
    LatLon { lat: f64, lon: f64 },
    /// Row of the explicit distance matrix.
    Row(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Base {
    pub id: String,
    pub position: Position,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provider {
    GreatCircle,
    Matrix,
}

impl fmt::Display for Provider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provider::GreatCircle => f.write_str("greatcircle"),
            Provider::Matrix => f.write_str("matrix"),
        }
    }
}

/// Haversine distance in km between two coordinates given in degrees.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (lon2 - lon1).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone)]
pub struct MetricSpace {
    bases: Vec<Base>,
    lookup: HashMap<String, BaseIx>,
    /// Position of each base when ordered by id; fixes haversine argument order.
    id_rank: Vec<u32>,
    provider: Provider,
    /// Row-major `n * n` table: the matrix itself, or a great-circle cache.
    table: Option<Vec<f64>>,
}

impl MetricSpace {
    /// Builds a great-circle space from `(id, lat, lon)` triples.
    pub fn great_circle<I, S>(bases: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64, f64)>,
        S: Into<String>,
    {
        let mut list = Vec::new();
        for (id, lat, lon) in bases {
            let id = id.into();
            let in_range = (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&lon);
            if !in_range {
                return Err(Error::InvalidCoordinates { id, lat, lon });
            }
            list.push(Base {
                id,
                position: Position::LatLon { lat, lon },
            });
        }
        let mut space = Self::assemble(list, Provider::GreatCircle, None)?;
        if space.len() <= DENSE_CACHE_MAX {
            let n = space.len();
            let mut table = vec![0.0; n * n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let d = space.compute(BaseIx(i as u32), BaseIx(j as u32));
                    table[i * n + j] = d;
                    table[j * n + i] = d;
                }
            }
            space.table = Some(table);
        }
        Ok(space)
    }

    /// Builds a matrix space; `rows[i][j]` is the distance from `ids[i]` to `ids[j]` in km.
    ///
    /// The matrix must be square, finite and nonnegative. Metric axioms are
    /// not enforced here; see [`validate_metric`].
    pub fn from_matrix<S: Into<String>>(ids: Vec<S>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = ids.len();
        if rows.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "{} rows for {} bases",
                rows.len(),
                n
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} columns, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) = {v} is not a nonnegative finite distance"
                )));
            }
            table.extend(row);
        }
        let bases = ids
            .into_iter()
            .enumerate()
            .map(|(i, id)| Base {
                id: id.into(),
                position: Position::Row(i),
            })
            .collect();
        Self::assemble(bases, Provider::Matrix, Some(table))
    }

    fn assemble(bases: Vec<Base>, provider: Provider, table: Option<Vec<f64>>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(bases.len());
        for (i, b) in bases.iter().enumerate() {
            if lookup.insert(b.id.clone(), BaseIx(i as u32)).is_some() {
                return Err(Error::DuplicateBase(b.id.clone()));
            }
        }
        let mut order: Vec<usize> = (0..bases.len()).collect();
        order.sort_by(|&a, &b| bases[a].id.cmp(&bases[b].id));
        let mut id_rank = vec![0u32; bases.len()];
        for (rank, &i) in order.iter().enumerate() {
            id_rank[i] = rank as u32;
        }
        Ok(Self {
            bases,
            lookup,
            id_rank,
            provider,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn provider(&self) -> Provider {
        self.provider
    }

    pub fn bases(&self) -> &[Base] {
        &self.bases
    }

    pub fn base(&self, ix: BaseIx) -> &Base {
        &self.bases[ix.index()]
    }

    pub fn base_ix(&self, id: &str) -> Result<BaseIx> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownBase(id.to_owned()))
    }

    /// Distance in km between two bases named by id.
    pub fn distance(&self, a: &str, b: &str) -> Result<f64> {
        Ok(self.dist(self.base_ix(a)?, self.base_ix(b)?))
    }

    /// Distance in km between two bases of this space.
    #[inline]
    pub fn dist(&self, a: BaseIx, b: BaseIx) -> f64 {
        match &self.table {
            Some(t) => t[a.index() * self.bases.len() + b.index()],
            None => self.compute(a, b),
        }
    }

    fn compute(&self, a: BaseIx, b: BaseIx) -> f64 {
        if a == b {
            return 0.0;
        }
        // Canonical order so d(a, b) and d(b, a) run the same float ops.
        let (a, b) = if self.id_rank[a.index()] <= self.id_rank[b.index()] {
            (a, b)
        } else {
            (b, a)
        };
        match (self.base(a).position, self.base(b).position) {
            (Position::LatLon { lat: la, lon: oa }, Position::LatLon { lat: lb, lon: ob }) => {
                haversine_km(la, oa, lb, ob)
            }
            // Matrix spaces always carry their table.
            _ => unreachable!("matrix distance requested without a table"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Identity {
        base: String,
        value: f64,
    },
    Symmetry {
        a: String,
        b: String,
        ab: f64,
        ba: f64,
    },
    Triangle {
        a: String,
        via: String,
        c: String,
        direct: f64,
        detour: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Identity { base, value } => {
                write!(f, "identity: d({base}, {base}) = {value}")
            }
            Violation::Symmetry { a, b, ab, ba } => {
                write!(f, "symmetry: d({a}, {b}) = {ab} but d({b}, {a}) = {ba}")
            }
            Violation::Triangle {
                a,
                via,
                c,
                direct,
                detour,
            } => write!(
                f,
                "triangle: d({a}, {c}) = {direct} > d({a}, {via}) + d({via}, {c}) = {detour}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks identity, symmetry and the triangle inequality.
///
/// Pairs are checked exhaustively when the space has at most 1000 bases and
/// over `samples` random pairs otherwise; the triangle inequality is checked
/// over `samples` random triples. Great-circle triples get a `1e-9` relative
/// allowance for rounding in the haversine evaluation; matrix entries are
/// compared exactly.
pub fn validate_metric(space: &MetricSpace, samples: usize, seed: u64) -> ValidationReport {
    let n = space.len();
    let mut report = ValidationReport::default();
    if n == 0 {
        return report;
    }
    let id = |i: usize| space.bases[i].id.clone();
    let ix = |i: usize| BaseIx(i as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for i in 0..n {
        let v = space.dist(ix(i), ix(i));
        if v != 0.0 {
            report.violations.push(Violation::Identity { base: id(i), value: v });
        }
    }

    let check_pair = |i: usize, j: usize, report: &mut ValidationReport| {
        let (ab, ba) = (space.dist(ix(i), ix(j)), space.dist(ix(j), ix(i)));
        report.pairs_checked += 1;
        if ab != ba {
            report.violations.push(Violation::Symmetry {
                a: id(i),
                b: id(j),
                ab,
                ba,
            });
        }
    };
    if n <= EXHAUSTIVE_PAIR_MAX {
        for i in 0..n {
            for j in (i + 1)..n {
                check_pair(i, j, &mut report);
            }
        }
    } else {
        for _ in 0..samples {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            check_pair(i, j, &mut report);
        }
    }

    let relative = match space.provider {
        Provider::GreatCircle => 1e-9,
        Provider::Matrix => 0.0,
    };
    for _ in 0..samples {
        let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let direct = space.dist(ix(a), ix(c));
        let detour = space.dist(ix(a), ix(b)) + space.dist(ix(b), ix(c));
        report.triples_checked += 1;
        if direct > detour + relative * detour.max(1.0) {
            report.violations.push(Violation::Triangle {
                a: id(a),
                via: id(b),
                c: id(c),
                direct,
                detour,
            });
        }
    }
    report
}
