//! Cross-checks between closed forms, the LP oracle and brute force, with
//! exact, reproducible reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::closed_form::{
    hybrid_theorem_boundary, mds_halfrate_boundary, mds_outer_bound, replication_box_chain, replication_membership,
    replication_support, simplex_membership, simplex_support,
};
use crate::code_model::{CodeFamily, CodeSpec};
use crate::error::{Error, Result};
use crate::piecewise::PiecewiseBoundary;
use crate::region::{max_weighted_sum, membership, trace_boundary_2d, DemandVector, SystemConfig};
use crate::scalar::Scalar;
use crate::schedulers::systematic_nodes;

/// Largest `Σ t_i` accepted by [`brute_force_membership`].
pub const BRUTE_FORCE_MAX_SETS: usize = 12;
/// Largest grid denominator accepted by [`brute_force_membership`].
pub const BRUTE_FORCE_MAX_DENOMINATOR: u32 = 8;

fn as_text<S: Scalar, Z: Serializer>(value: &S, z: Z) -> std::result::Result<Z::Ok, Z::Error> {
    z.serialize_str(&value.to_string())
}

fn as_texts<S: Scalar, Z: Serializer>(values: &[S], z: Z) -> std::result::Result<Z::Ok, Z::Error> {
    z.collect_seq(values.iter().map(ToString::to_string))
}

fn pairs_as_texts<S: Scalar, Z: Serializer>(values: &[(S, S)], z: Z) -> std::result::Result<Z::Ok, Z::Error> {
    z.collect_seq(values.iter().map(|(a, b)| [a.to_string(), b.to_string()]))
}

/// One closed-form value against the matching LP value. `point` is the
/// abscissa `λa` for chain comparisons and the direction `w` for support
/// comparisons; `gap = closed_form − lp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Comparison<S> {
    #[serde(serialize_with = "as_texts")]
    pub point: Vec<S>,
    #[serde(serialize_with = "as_text")]
    pub closed_form: S,
    #[serde(serialize_with = "as_text")]
    pub lp: S,
    #[serde(serialize_with = "as_text")]
    pub gap: S,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct MembershipCheck<S> {
    #[serde(serialize_with = "as_texts")]
    pub demand: Vec<S>,
    pub closed_form: bool,
    pub lp: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct RegionReport<S> {
    pub instance: String,
    pub seed: Option<u64>,
    pub comparisons: Vec<Comparison<S>>,
    pub membership_checks: Vec<MembershipCheck<S>>,
    #[serde(serialize_with = "as_text")]
    pub max_abs_gap: S,
    /// `λa` intervals on which two chains differ.
    #[serde(serialize_with = "pairs_as_texts")]
    pub disagreeing_segments: Vec<(S, S)>,
    /// LP-feasible demands rejected by the closed form.
    pub violations: usize,
    /// Demands accepted by the closed form but LP-infeasible.
    pub closed_only: usize,
}

impl<S: Scalar> RegionReport<S> {
    pub fn new(instance: impl Into<String>) -> Self {
        Self {
            instance: instance.into(),
            seed: None,
            comparisons: Vec::new(),
            membership_checks: Vec::new(),
            max_abs_gap: S::zero(),
            disagreeing_segments: Vec::new(),
            violations: 0,
            closed_only: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push_comparison(&mut self, point: Vec<S>, closed_form: S, lp: S) {
        let gap = closed_form.clone() - lp.clone();
        if gap.abs() > self.max_abs_gap {
            self.max_abs_gap = gap.abs();
        }
        self.comparisons.push(Comparison {
            point,
            closed_form,
            lp,
            gap,
        });
    }

    pub fn push_membership(&mut self, demand: Vec<S>, closed_form: bool, lp: bool) {
        match (closed_form, lp) {
            (false, true) => self.violations += 1,
            (true, false) => self.closed_only += 1,
            _ => {}
        }
        self.membership_checks.push(MembershipCheck {
            demand,
            closed_form,
            lp,
        });
    }

    /// Zero gap and no membership disagreement in either direction.
    pub fn agrees(&self) -> bool {
        self.max_abs_gap.is_zero() && self.violations == 0 && self.closed_only == 0
    }

    /// The comparison with the largest `|gap|`, earliest first on ties.
    pub fn worst(&self) -> Option<&Comparison<S>> {
        self.comparisons
            .iter().find(|c| c.gap.abs() == self.max_abs_gap && !self.max_abs_gap.is_zero())
    }
}

/// Compares `closed` against `lp` at every vertex abscissa of either chain and
/// at the midpoints between consecutive abscissae. Outside a chain's domain
/// its value is taken as zero.
pub fn compare_boundaries<S: Scalar>(closed: &PiecewiseBoundary<S>, lp: &PiecewiseBoundary<S>) -> RegionReport<S> {
    let mut xs: Vec<S> = closed
        .vertices()
        .iter()
        .chain(lp.vertices())
        .map(|(x, _)| x.clone())
        .collect();
    xs.sort();
    xs.dedup();
    let two = S::from_int(2);
    let mut samples = Vec::with_capacity(2 * xs.len());
    for (i, x) in xs.iter().enumerate() {
        samples.push(x.clone());
        if let Some(next) = xs.get(i + 1) {
            samples.push((x.clone() + next.clone()) / two.clone());
        }
    }
    let value = |b: &PiecewiseBoundary<S>, x: &S| b.eval(x).unwrap_or_else(S::zero);
    let mut report = RegionReport::new("");
    for x in &samples {
        report.push_comparison(vec![x.clone()], value(closed, x), value(lp, x));
    }
    // gaps are linear between samples, so a segment disagrees iff a sample on it does
    let mut segments: Vec<(S, S)> = Vec::new();
    for (i, pair) in samples.windows(2).enumerate() {
        let differs = !report.comparisons[i].gap.is_zero() || !report.comparisons[i + 1].gap.is_zero();
        if !differs {
            continue;
        }
        match segments.last_mut() {
            Some(last) if last.1 == pair[0] => last.1 = pair[1].clone(),
            _ => segments.push((pair[0].clone(), pair[1].clone())),
        }
    }
    report.disagreeing_segments = segments;
    report
}

/// Compares a closed-form support function against the LP in each direction.
pub fn compare_support<S, F>(config: &SystemConfig<S>, directions: &[Vec<S>], closed: F) -> Result<RegionReport<S>>
where
    S: Scalar,
    F: Fn(&[S]) -> Result<S> + Sync,
{
    let values: Vec<(S, S)> = directions
        .par_iter()
        .map(|w| Ok((closed(w)?, max_weighted_sum(config, w)?)))
        .collect::<Result<_>>()?;
    let mut report = RegionReport::new(describe(config.code()));
    for (w, (c, l)) in directions.iter().zip(values) {
        report.push_comparison(w.clone(), c, l);
    }
    Ok(report)
}

/// Short instance descriptor such as `mds 4 2` or `hybrid 2 1 1`.
pub fn describe(code: &CodeSpec) -> String {
    match code.family() {
        CodeFamily::Replication { copies } => {
            let parts: Vec<String> = copies.iter().map(ToString::to_string).collect();
            format!("replication {}", parts.join(" "))
        }
        CodeFamily::Mds => format!("mds {} {}", code.n(), code.k()),
        CodeFamily::Simplex => format!("simplex {}", code.k()),
        CodeFamily::Hybrid(h) => format!("hybrid {} {} {}", h.a_nodes, h.b_nodes, h.coded_nodes),
        CodeFamily::Generic => format!("generator q={} n={} k={}", code.q(), code.n(), code.k()),
    }
}

/// The closed-form chain claimed for a two-file system.
pub fn closed_form_chain<S: Scalar>(config: &SystemConfig<S>) -> Result<PiecewiseBoundary<S>> {
    let code = config.code();
    if code.k() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            got: code.k(),
        });
    }
    let mu = config.mu();
    match code.family() {
        CodeFamily::Replication { copies } => Ok(replication_box_chain(copies[0], copies[1], mu)),
        CodeFamily::Mds => Ok(mds_halfrate_boundary(code.n(), 2, mu)?
            .chain()
            .expect("two files")),
        CodeFamily::Simplex => {
            let top = S::from_int(2) * mu.clone();
            Ok(PiecewiseBoundary::new(vec![(S::zero(), top.clone()), (top, S::zero())])?)
        }
        CodeFamily::Hybrid(spec) => Ok(hybrid_theorem_boundary(*spec, mu)),
        CodeFamily::Generic => Err(no_closed_form()),
    }
}

fn no_closed_form() -> Error {
    Error::InvalidCode("no closed form is known for a generic generator matrix".into())
}

/// Closed-form support function `max w.λ` for any `K`.
pub fn closed_form_support<S: Scalar>(config: &SystemConfig<S>, weights: &[S]) -> Result<S> {
    let code = config.code();
    let mu = config.mu();
    match code.family() {
        CodeFamily::Replication { copies } => Ok(replication_support(copies, mu, weights)),
        CodeFamily::Mds => Ok(mds_halfrate_boundary(code.n(), code.k(), mu)?.support(weights)),
        CodeFamily::Simplex => Ok(simplex_support(code.k(), mu, weights)),
        CodeFamily::Hybrid(_) => {
            let chain = closed_form_chain(config)?;
            Ok(chain
                .vertices()
                .iter()
                .map(|(x, y)| weights[0].clone() * x.clone() + weights[1].clone() * y.clone())
                .max()
                .expect("nonempty chain"))
        }
        CodeFamily::Generic => Err(no_closed_form()),
    }
}

/// Closed-form membership for any `K`.
pub fn closed_form_membership<S: Scalar>(config: &SystemConfig<S>, demand: &DemandVector<S>) -> Result<bool> {
    let code = config.code();
    let mu = config.mu();
    match code.family() {
        CodeFamily::Replication { copies } => replication_membership(demand, copies, mu),
        CodeFamily::Mds => Ok(mds_halfrate_boundary(code.n(), code.k(), mu)?.contains(demand)),
        CodeFamily::Simplex => simplex_membership(demand, code.k(), mu),
        CodeFamily::Hybrid(_) => {
            let chain = closed_form_chain(config)?;
            let r = demand.rates();
            Ok(chain.eval(&r[0]).is_some_and(|top| r[1] <= top))
        }
        CodeFamily::Generic => Err(no_closed_form()),
    }
}

/// Unit vectors, the all-ones vector, then up to `extra` distinct seeded
/// random integer directions with entries in `0..=4`.
pub fn seeded_directions<S: Scalar>(k: usize, extra: usize, seed: u64) -> Vec<Vec<S>> {
    let mut dirs: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    if k > 1 {
        dirs.push(vec![1; k]);
    }
    let target = dirs.len() + extra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // the draw space is finite, so give up after a generous number of tries
    for _ in 0..64 * (extra + 1) {
        if dirs.len() == target {
            break;
        }
        let w: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=4)).collect();
        if w.iter().any(|&v| v != 0) && !dirs.contains(&w) {
            dirs.push(w);
        }
    }
    dirs.into_iter()
        .map(|w| w.into_iter().map(S::from_int).collect())
        .collect()
}

/// Closed form against LP: chains when `K = 2`, support functions otherwise.
pub fn compare_config<S: Scalar>(config: &SystemConfig<S>, seed: u64, extra_directions: usize) -> Result<RegionReport<S>> {
    let mut report = if config.k() == 2 {
        let closed = closed_form_chain(config)?;
        let lp = trace_boundary_2d(config)?;
        compare_boundaries(&closed, &lp)
    } else {
        let dirs = seeded_directions(config.k(), extra_directions, seed);
        compare_support(config, &dirs, |w| closed_form_support(config, w))?
    };
    report.instance = describe(config.code());
    Ok(report.with_seed(seed))
}

/// Exhaustive search over allocations whose shares are multiples of
/// `μ / denominator`. `true` is a certificate of membership; `false` only
/// says that no such grid allocation exists.
pub fn brute_force_membership<S: Scalar>(
    config: &SystemConfig<S>,
    demand: &DemandVector<S>,
    denominator: u32,
) -> Result<bool> {
    if config.num_vars() > BRUTE_FORCE_MAX_SETS || denominator == 0 || denominator > BRUTE_FORCE_MAX_DENOMINATOR {
        return Err(Error::TooLarge(format!(
            "brute force needs at most {BRUTE_FORCE_MAX_SETS} recovering sets and a denominator in 1..={BRUTE_FORCE_MAX_DENOMINATOR}, got {} and {denominator}",
            config.num_vars()
        )));
    }
    if demand.len() != config.k() {
        return Err(Error::Mismatch(format!(
            "demand has {} entries, system stores K = {} files",
            demand.len(),
            config.k()
        )));
    }
    let unit = config.mu().clone() / S::from_int(i64::from(denominator));
    let mut units = Vec::with_capacity(demand.len());
    for rate in demand.rates() {
        let count = rate.clone() / unit.clone();
        let whole = count.to_usize().ok_or_else(|| Error::TooLarge(format!("demand {rate} is too large")))?;
        if count != S::from_count(whole) {
            return Ok(false);
        }
        units.push(whole);
    }
    let sets: Vec<(usize, &[usize])> = (0..config.k())
        .flat_map(|f| config.recovery().sets(f).iter().map(move |s| (f, s.as_slice())))
        .collect();
    let mut search = GridSearch {
        sets,
        capacity: denominator as usize,
        loads: vec![0; config.n()],
    };
    Ok(search.fill(0, &units))
}

struct GridSearch<'a> {
    sets: Vec<(usize, &'a [usize])>,
    capacity: usize,
    loads: Vec<usize>,
}

impl GridSearch<'_> {
    /// Assigns the remaining units of each file to sets `idx..`, depth first.
    fn fill(&mut self, idx: usize, remaining: &[usize]) -> bool {
        if idx == self.sets.len() {
            return remaining.iter().all(|&r| r == 0);
        }
        let (file, set) = self.sets[idx];
        let last_for_file = self.sets.get(idx + 1).is_none_or(|(f, _)| *f != file);
        let room = set.iter().map(|&v| self.capacity - self.loads[v]).min().unwrap_or(0);
        let want = remaining[file];
        let range = if last_for_file {
            if want > room {
                return false;
            }
            want..=want
        } else {
            0..=want.min(room)
        };
        let mut rest = remaining.to_vec();
        for take in range.rev() {
            for &v in set {
                self.loads[v] += take;
            }
            rest[file] = want - take;
            let found = self.fill(idx + 1, &rest);
            for &v in set {
                self.loads[v] -= take;
            }
            if found {
                return true;
            }
        }
        false
    }
}

/// Checks that every LP-feasible demand satisfies the MDS outer bound, on
/// `samples` seeded random demands (multiples of `μ/8`) followed by the grid
/// of step `μ/2`. Both stay inside the box `λ_i <= (1 + (N−1)/K) μ`, the
/// largest single-file rate.
pub fn sweep_outer_bound<S: Scalar>(config: &SystemConfig<S>, samples: usize, seed: u64) -> Result<RegionReport<S>> {
    if *config.code().family() != CodeFamily::Mds || systematic_nodes(config).is_none() {
        return Err(Error::InvalidCode("outer-bound sweep needs a systematic MDS code".into()));
    }
    let (n, k) = (config.n(), config.k());
    let mu = config.mu().clone();
    let cap = S::one() + S::from_count(n - 1) / S::from_count(k);
    // truncation is the floor here since the cap is positive
    let random_top = (cap.clone() * S::from_int(8)).to_i64().expect("small cap");
    let grid_top = (cap * S::from_int(2)).to_i64().expect("small cap");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut demands: Vec<Vec<S>> = (0..samples)
        .map(|_| {
            (0..k)
                .map(|_| S::ratio(rng.gen_range(0..=random_top), 8) * mu.clone())
                .collect()
        })
        .collect();
    let mut grid: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..k {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                (0..=grid_top).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    demands.extend(
        grid.into_iter()
            .map(|p| p.into_iter().map(|v| S::ratio(v, 2) * mu.clone()).collect()),
    );

    let verdicts: Vec<(bool, bool)> = demands
        .par_iter()
        .map(|rates| {
            let d = DemandVector::new(rates.clone())?;
            Ok((mds_outer_bound(&d, n, k, &mu), membership(config, &d)?.is_some()))
        })
        .collect::<Result<_>>()?;
    let mut report = RegionReport::new(describe(config.code())).with_seed(seed);
    for (d, (closed, lp)) in demands.into_iter().zip(verdicts) {
        report.push_membership(d, closed, lp);
    }
    Ok(report)
}
