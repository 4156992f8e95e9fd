//! Exact search for Tverberg-type witnesses of affine maps: r pairwise
//! disjoint faces of the n-skeleton whose images share a point.
//!
//! All geometry is exact rational arithmetic; intersection of convex hulls
//! is decided by linear feasibility on the joint barycentric system, so
//! boundary-touching intersections are classified correctly. The returned
//! witness is canonical: minimal total dimension, then lexicographically
//! first — identical across runs and thread counts.

mod lp;

pub use lp::{feasible_point, LinearSystem};

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certificates::enumerate_disjoint_tuples;
use crate::complex::{face_poset, order_complex, Simplex, SimplicialComplex};
use crate::exec;
use crate::{Error, Result, DEFAULT_MAX_CELLS};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    use num_bigint::BigInt;
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    match t.split_once('/') {
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
        Some((num, den)) => {
            let num = BigInt::from_str(num).map_err(|_| bad())?;
            let den = BigInt::from_str(den).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

pub fn rational_string(v: &BigRational) -> String {
    v.to_string()
}

/// An affine map determined by exact rational vertex coordinates, keyed
/// by original vertex labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    dim: usize,
    coords: BTreeMap<u64, Vec<BigRational>>,
}

impl AffineMap {
    pub fn new(dim: usize) -> Self {
        Self { dim, coords: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, label: u64, coords: Vec<BigRational>) -> Result<()> {
        if coords.len() != self.dim {
            return Err(Error::BadInput(format!(
                "vertex {label}: expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        self.coords.insert(label, coords);
        Ok(())
    }

    pub fn get(&self, label: u64) -> Option<&[BigRational]> {
        self.coords.get(&label).map(Vec::as_slice)
    }

    pub fn labels(&self) -> impl Iterator<Item = u64> + '_ {
        self.coords.keys().copied()
    }

    /// Errors with the first vertex of `x` lacking coordinates.
    pub fn ensure_covers(&self, x: &SimplicialComplex) -> Result<()> {
        for &l in x.labels() {
            if !self.coords.contains_key(&l) {
                return Err(Error::MissingCoordinates(l));
            }
        }
        Ok(())
    }

    /// Exact barycenter image of a face (averages the vertex images).
    pub fn barycenter(&self, x: &SimplicialComplex, face: &Simplex) -> Result<Vec<BigRational>> {
        let k = BigRational::from_integer((face.len() as i64).into());
        let mut acc = vec![BigRational::zero(); self.dim];
        for &v in face.vertices() {
            let label = x.label(v);
            let c = self.get(label).ok_or(Error::MissingCoordinates(label))?;
            for (a, b) in acc.iter_mut().zip(c) {
                *a += b;
            }
        }
        Ok(acc.into_iter().map(|a| a / &k).collect())
    }

    pub fn to_json(&self) -> AffineMapJson {
        AffineMapJson {
            dim: self.dim,
            coords: self
                .coords
                .iter()
                .map(|(l, cs)| (l.to_string(), cs.iter().map(rational_string).collect()))
                .collect(),
        }
    }

    pub fn from_json(doc: &AffineMapJson) -> Result<AffineMap> {
        let mut map = AffineMap::new(doc.dim);
        for (label, coords) in &doc.coords {
            let label: u64 = label
                .parse()
                .map_err(|_| Error::BadInput(format!("bad vertex label {label:?}")))?;
            let coords: Vec<BigRational> =
                coords.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
            map.insert(label, coords)?;
        }
        Ok(map)
    }
}

/// On-disk coordinate format: rationals as "p/q" strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineMapJson {
    pub dim: usize,
    pub coords: BTreeMap<String, Vec<String>>,
}

/// r pairwise disjoint faces with an exact common image point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// faces as original labels, tuple sorted lexicographically
    pub faces: Vec<Vec<u64>>,
    pub point: Vec<BigRational>,
    /// barycentric coefficients, one list per face
    pub coefficients: Vec<Vec<BigRational>>,
    pub sum_dim: i64,
}

impl Witness {
    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            faces: self.faces.clone(),
            point: self.point.iter().map(rational_string).collect(),
            coefficients: self
                .coefficients
                .iter()
                .map(|c| c.iter().map(rational_string).collect())
                .collect(),
            sum_dim: self.sum_dim,
        }
    }

    pub fn from_json(doc: &WitnessJson) -> Result<Witness> {
        Ok(Witness {
            faces: doc.faces.clone(),
            point: doc.point.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            coefficients: doc
                .coefficients
                .iter()
                .map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
                .collect::<Result<_>>()?,
            sum_dim: doc.sum_dim,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub faces: Vec<Vec<u64>>,
    pub point: Vec<String>,
    pub coefficients: Vec<Vec<String>>,
    pub sum_dim: i64,
}

/// Why a witness failed verification.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessDefect {
    #[error("faces {0} and {1} share a vertex")]
    OverlappingFaces(usize, usize),
    #[error("face {0} has {1} coefficients for {2} vertices")]
    CoefficientCount(usize, usize, usize),
    #[error("face {face}: coefficient {index} is negative")]
    NegativeCoefficient { face: usize, index: usize },
    #[error("face {0}: coefficients sum to {1}, not 1")]
    SumNotOne(usize, String),
    #[error("vertex {0} has no coordinates")]
    MissingCoordinates(u64),
    #[error("face {0}: affine image differs from the witness point")]
    ImageMismatch(usize),
    #[error("point dimension {0} does not match the map dimension {1}")]
    DimensionMismatch(usize, usize),
}

/// Exact re-verification of a witness against an affine map.
pub fn verify_witness(w: &Witness, f: &AffineMap) -> std::result::Result<(), WitnessDefect> {
    if w.point.len() != f.dim() {
        return Err(WitnessDefect::DimensionMismatch(w.point.len(), f.dim()));
    }
    for i in 0..w.faces.len() {
        for j in (i + 1)..w.faces.len() {
            if w.faces[i].iter().any(|v| w.faces[j].contains(v)) {
                return Err(WitnessDefect::OverlappingFaces(i, j));
            }
        }
    }
    for (i, (face, coeffs)) in w.faces.iter().zip(&w.coefficients).enumerate() {
        if face.len() != coeffs.len() {
            return Err(WitnessDefect::CoefficientCount(i, coeffs.len(), face.len()));
        }
        let mut sum = BigRational::zero();
        let mut image = vec![BigRational::zero(); f.dim()];
        for (j, (&label, lambda)) in face.iter().zip(coeffs).enumerate() {
            if lambda.is_negative() {
                return Err(WitnessDefect::NegativeCoefficient { face: i, index: j });
            }
            sum += lambda;
            let Some(c) = f.get(label) else {
                return Err(WitnessDefect::MissingCoordinates(label));
            };
            for (acc, v) in image.iter_mut().zip(c) {
                *acc += lambda * v;
            }
        }
        if !sum.is_one() {
            return Err(WitnessDefect::SumNotOne(i, rational_string(&sum)));
        }
        if image != w.point {
            return Err(WitnessDefect::ImageMismatch(i));
        }
    }
    Ok(())
}

/// Decides whether the convex hulls of the images of `faces` share a
/// point; returns per-face barycentric coefficients of one if so.
fn common_point(
    x: &SimplicialComplex,
    faces: &[Simplex],
    f: &AffineMap,
) -> Result<Option<Vec<Vec<BigRational>>>> {
    let d = f.dim();
    let r = faces.len();
    let sizes: Vec<usize> = faces.iter().map(Simplex::len).collect();
    let total: usize = sizes.iter().sum();
    let offset: Vec<usize> = sizes
        .iter()
        .scan(0usize, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let mut system = LinearSystem::new(total);
    for i in 0..r {
        let mut row = vec![BigRational::zero(); total];
        for j in 0..sizes[i] {
            row[offset[i] + j] = BigRational::one();
        }
        system.push_row(row, BigRational::one());
    }
    let coord = |face: &Simplex, j: usize, t: usize| -> Result<BigRational> {
        let label = x.label(face.vertices()[j]);
        let c = f.get(label).ok_or(Error::MissingCoordinates(label))?;
        Ok(c[t].clone())
    };
    for i in 1..r {
        for t in 0..d {
            let mut row = vec![BigRational::zero(); total];
            for j in 0..sizes[0] {
                row[offset[0] + j] = coord(&faces[0], j, t)?;
            }
            for j in 0..sizes[i] {
                row[offset[i] + j] = -coord(&faces[i], j, t)?;
            }
            system.push_row(row, BigRational::zero());
        }
    }
    let Some(solution) = feasible_point(&system) else {
        return Ok(None);
    };
    let coefficients: Vec<Vec<BigRational>> =
        (0..r).map(|i| solution[offset[i]..offset[i] + sizes[i]].to_vec()).collect();
    Ok(Some(coefficients))
}

fn image_point(
    x: &SimplicialComplex,
    face: &Simplex,
    coeffs: &[BigRational],
    f: &AffineMap,
) -> Vec<BigRational> {
    let mut point = vec![BigRational::zero(); f.dim()];
    for (&v, lambda) in face.vertices().iter().zip(coeffs) {
        let c = f.get(x.label(v)).expect("coverage checked");
        for (acc, w) in point.iter_mut().zip(c) {
            *acc += lambda * w;
        }
    }
    point
}

/// Searches the n-skeleton for the canonical witness: unordered r-tuples
/// of pairwise disjoint faces in increasing total dimension with
/// lexicographic tie-break, capped by `bound` when given. Returns `None`
/// after exhausting the search space.
pub fn find_witness(
    x: &SimplicialComplex,
    n: i64,
    r: usize,
    f: &AffineMap,
    bound: Option<i64>,
) -> Result<Option<Witness>> {
    find_witness_with_limit(x, n, r, f, bound, DEFAULT_MAX_CELLS)
}

pub fn find_witness_with_limit(
    x: &SimplicialComplex,
    n: i64,
    r: usize,
    f: &AffineMap,
    bound: Option<i64>,
    limit: usize,
) -> Result<Option<Witness>> {
    if r < 2 {
        return Err(Error::BadInput(format!("witnesses need r >= 2 faces, got {r}")));
    }
    let xn = x.skeleton(n);
    if xn.is_empty() {
        return Ok(None);
    }
    f.ensure_covers(&xn)?;
    let budget = bound.unwrap_or(r as i64 * (xn.dim() + 1));
    let mut tuples: Vec<Vec<Simplex>> = enumerate_disjoint_tuples(&xn, r, budget, limit)?
        .into_iter()
        .filter(|t| t.len() == r)
        .collect();
    tuples.sort_by(|a, b| {
        let da: i64 = a.iter().map(Simplex::dim).sum();
        let db: i64 = b.iter().map(Simplex::dim).sum();
        da.cmp(&db).then_with(|| a.cmp(b))
    });
    let mut start = 0usize;
    while start < tuples.len() {
        let sum_dim: i64 = tuples[start].iter().map(Simplex::dim).sum();
        let end = start
            + tuples[start..]
                .iter()
                .take_while(|t| t.iter().map(Simplex::dim).sum::<i64>() == sum_dim)
                .count();
        let group = &tuples[start..end];
        let hits: Vec<Option<Vec<Vec<BigRational>>>> =
            exec::try_map_collect(group, |tuple| common_point(&xn, tuple, f))?;
        if let Some(idx) = hits.iter().position(Option::is_some) {
            let tuple = &group[idx];
            let coefficients = hits[idx].clone().unwrap();
            let point = image_point(&xn, &tuple[0], &coefficients[0], f);
            return Ok(Some(Witness {
                faces: tuple.iter().map(|s| xn.face_labels(s)).collect(),
                point,
                coefficients,
                sum_dim,
            }));
        }
        start = end;
    }
    Ok(None)
}

/// The constraint lift: the base map extended by one PL coordinate on the
/// barycentric subdivision that vanishes exactly on the subdivision
/// vertices carried by the n-skeleton.
#[derive(Debug, Clone)]
pub struct ConstraintMap {
    /// dimension of the base map (the lift has one more coordinate)
    pub base_dim: usize,
    /// the subdivision sd(X); vertex i = face i of X
    pub subdivision: SimplicialComplex,
    /// face of X (labels) carried by each subdivision vertex
    pub cell_of_vertex: Vec<Vec<u64>>,
    /// the lifted affine map on subdivision vertices
    pub lifted: AffineMap,
    /// vertices of X that received zero coordinates by extension
    pub zero_extended: Vec<u64>,
}

/// Outcome of the lifted search.
#[derive(Debug, Clone)]
pub struct ConstraintLift {
    pub constraint: ConstraintMap,
    /// dimension bound (r-1)(d+1) imposed on the lifted search
    pub bound: i64,
    pub witness: Option<Witness>,
    /// per witness face: the support chain as faces of X (labels)
    pub carrier_chains: Option<Vec<Vec<Vec<u64>>>>,
    /// all support carriers lie in faces of dimension <= n
    pub carriers_in_skeleton: Option<bool>,
    /// the common point's last coordinate is 0
    pub last_coordinate_zero: Option<bool>,
}

/// Builds g = (f, c) on sd(X) — c being 0 on subdivision vertices of
/// dimension <= n and 1 above — and runs the bounded witness search there.
pub fn constraint_lift(
    x: &SimplicialComplex,
    n: i64,
    r: usize,
    f: &AffineMap,
) -> Result<ConstraintLift> {
    if x.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let d = f.dim();
    // zero-extend the base map over vertices outside the skeleton
    let mut base = f.clone();
    let mut zero_extended = Vec::new();
    for &label in x.labels() {
        if base.get(label).is_none() {
            base.insert(label, vec![BigRational::zero(); d])?;
            zero_extended.push(label);
        }
    }
    let poset = face_poset(x)?;
    let subdivision = order_complex(&poset).into_complex();
    let mut lifted = AffineMap::new(d + 1);
    let mut cell_of_vertex = Vec::with_capacity(poset.len());
    for (i, face) in poset.elements().iter().enumerate() {
        let mut coords = base.barycenter(x, face)?;
        coords.push(if face.dim() <= n { BigRational::zero() } else { BigRational::one() });
        lifted.insert(i as u64, coords)?;
        cell_of_vertex.push(x.face_labels(face));
    }
    let bound = (r as i64 - 1) * (d as i64 + 1);
    let witness = find_witness(&subdivision, subdivision.dim(), r, &lifted, Some(bound))?;
    let (carrier_chains, carriers_in_skeleton, last_coordinate_zero) = match &witness {
        None => (None, None, None),
        Some(w) => {
            let mut chains = Vec::new();
            let mut in_skeleton = true;
            for (face, coeffs) in w.faces.iter().zip(&w.coefficients) {
                let support: Vec<u64> = face
                    .iter()
                    .zip(coeffs)
                    .filter(|(_, c)| c.is_positive())
                    .map(|(&v, _)| v)
                    .collect();
                let chain: Vec<Vec<u64>> = support
                    .iter()
                    .map(|&v| cell_of_vertex[v as usize].clone())
                    .collect();
                for el in &support {
                    if poset.dim_label(*el as usize) > n {
                        in_skeleton = false;
                    }
                }
                chains.push(chain);
            }
            let zero = w.point[d].is_zero();
            (Some(chains), Some(in_skeleton), Some(zero))
        }
    };
    Ok(ConstraintLift {
        constraint: ConstraintMap {
            base_dim: d,
            subdivision,
            cell_of_vertex,
            lifted,
            zero_extended,
        },
        bound,
        witness,
        carrier_chains,
        carriers_in_skeleton,
        last_coordinate_zero,
    })
}

/// Grid for random coordinate sampling: numerators uniform in
/// [-max_abs_numerator, max_abs_numerator] over a fixed denominator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoordBox {
    pub max_abs_numerator: i64,
    pub denominator: u64,
}

impl Default for CoordBox {
    fn default() -> Self {
        CoordBox { max_abs_numerator: 1_000_000, denominator: 1000 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: u32,
    pub hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_dim: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_faces: Option<Vec<Vec<u64>>>,
    pub verified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialStats {
    pub trials: u32,
    pub hits: u32,
    pub hit_fraction: f64,
    pub hit_fraction_exact: String,
    pub sum_dim_histogram: BTreeMap<i64, u32>,
    pub all_verified: bool,
    pub seed: u64,
    pub coord_box: CoordBox,
    pub per_trial: Vec<TrialRecord>,
}

/// Runs seeded random trials: per trial, rational vertex coordinates are
/// sampled from the grid and the canonical witness search runs on the
/// n-skeleton. Fully deterministic for a given (input, seed), independent
/// of thread count: trial t draws from stream t of the seeded generator.
pub fn random_trials(
    x: &SimplicialComplex,
    n: i64,
    r: usize,
    d: usize,
    trials: u32,
    seed: u64,
    coord_box: CoordBox,
) -> Result<TrialStats> {
    if trials < 1 {
        return Err(Error::BadInput("at least one trial is required".into()));
    }
    if coord_box.denominator == 0 {
        return Err(Error::BadInput("the sampling grid needs a nonzero denominator".into()));
    }
    let xn = x.skeleton(n);
    if xn.is_empty() {
        return Err(Error::EmptyComplex);
    }
    let labels: Vec<u64> = xn.labels().to_vec();
    let records: Vec<Result<TrialRecord>> = exec::map_range(trials as usize, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64 + 1);
        let mut f = AffineMap::new(d);
        for &label in &labels {
            let coords: Vec<BigRational> = (0..d)
                .map(|_| {
                    let num = rng.random_range(-coord_box.max_abs_numerator..=coord_box.max_abs_numerator);
                    BigRational::new(num.into(), (coord_box.denominator as i64).into())
                })
                .collect();
            f.insert(label, coords).expect("dimension matches");
        }
        let witness = find_witness(&xn, n, r, &f, None)?;
        Ok(match witness {
            None => TrialRecord {
                trial: t as u32,
                hit: false,
                sum_dim: None,
                witness_faces: None,
                verified: true,
            },
            Some(w) => {
                let verified = verify_witness(&w, &f).is_ok();
                TrialRecord {
                    trial: t as u32,
                    hit: true,
                    sum_dim: Some(w.sum_dim),
                    witness_faces: Some(w.faces),
                    verified,
                }
            }
        })
    });
    let per_trial: Vec<TrialRecord> = records.into_iter().collect::<Result<_>>()?;
    let hits = per_trial.iter().filter(|r| r.hit).count() as u32;
    let mut sum_dim_histogram = BTreeMap::new();
    for rec in &per_trial {
        if let Some(sd) = rec.sum_dim {
            *sum_dim_histogram.entry(sd).or_insert(0u32) += 1;
        }
    }
    Ok(TrialStats {
        trials,
        hits,
        hit_fraction: hits as f64 / trials as f64,
        hit_fraction_exact: format!("{hits}/{trials}"),
        sum_dim_histogram,
        all_verified: per_trial.iter().all(|r| r.verified),
        seed,
        coord_box,
        per_trial,
    })
}
