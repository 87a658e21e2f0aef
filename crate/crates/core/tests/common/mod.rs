//! Test-only exact-arithmetic oracle and random instance generators.
//!
//! The oracle decides informativity straight from its definition: it solves
//! the data equations exactly over the rationals, enumerates members of the
//! resulting affine solution set and intersects their transfer-value
//! solution sets at `σ`. It shares no code with the library's rank tests.

#![allow(dead_code)]

use ddinterp_core::{Complex64, DataSet, SystemParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn to_f64(v: &Q) -> f64 {
    v.to_f64().expect("rational fits in f64")
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gq {
    pub re: Q,
    pub im: Q,
}

impl Gq {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Q::zero())
    }

    pub fn one() -> Self {
        Self::real(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Gq) -> Gq {
        Gq::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Gq) -> Gq {
        Gq::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &Gq) -> Gq {
        Gq::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn scale(&self, s: &Q) -> Gq {
        Gq::new(&self.re * s, &self.im * s)
    }

    pub fn div(&self, o: &Gq) -> Gq {
        let den = &o.re * &o.re + &o.im * &o.im;
        let num = self.mul(&o.conj());
        Gq::new(num.re / &den, num.im / den)
    }

    pub fn conj(&self) -> Gq {
        Gq::new(self.re.clone(), -self.im.clone())
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Exact solution set `{x : A x = b}` as particular solution plus null basis.
pub struct AffineSet {
    pub particular: Vec<Q>,
    pub null_basis: Vec<Vec<Q>>,
}

/// Gauss-Jordan elimination over the rationals. `None` if inconsistent.
pub fn solve_exact(a: &[Vec<Q>], b: &[Q]) -> Option<AffineSet> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            if r != row && !target[col].is_zero() {
                let f = target[col].clone();
                for (t, p) in target.iter_mut().zip(&pivot_row) {
                    *t = &*t - &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut particular = vec![Q::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = m[r][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let null_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect();
    Some(AffineSet {
        particular,
        null_basis,
    })
}

/// Exact rational instance: true system, data, and points to probe.
#[derive(Clone, Debug)]
pub struct Instance {
    pub n: usize,
    /// `[p_0 … p_{n-1}]`
    pub p: Vec<Q>,
    /// `[q_0 … q_n]`
    pub q: Vec<Q>,
    pub u: Vec<Q>,
    pub y: Vec<Q>,
    pub sigmas: Vec<Gq>,
    pub excitation: &'static str,
}

impl Instance {
    pub fn data(&self) -> DataSet {
        DataSet::from_vecs(
            self.u.iter().map(to_f64).collect(),
            self.y.iter().map(to_f64).collect(),
        )
        .unwrap()
    }

    pub fn params(&self) -> SystemParams {
        SystemParams::new(
            self.p.iter().map(to_f64).collect(),
            self.q.iter().map(to_f64).collect(),
        )
        .unwrap()
    }
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}

/// Exact forward recursion.
pub fn simulate_exact(p: &[Q], qv: &[Q], u: &[Q], init: &[Q]) -> Vec<Q> {
    let n = p.len();
    let mut y: Vec<Q> = init.to_vec();
    for t in n..u.len() {
        let b = t - n;
        let mut acc = Q::zero();
        for i in 0..=n {
            acc += &qv[i] * &u[b + i];
        }
        for i in 0..n {
            acc -= &p[i] * &y[b + i];
        }
        y.push(acc);
    }
    y
}

const ROOTS: [(i64, i64); 5] = [(-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1)];

fn random_dyadic<R: Rng>(rng: &mut R, max_abs: i64) -> Q {
    q(rng.gen_range(-2 * max_abs..=2 * max_abs), 2)
}

/// Random small instance with `n ≤ 3`, `T ≤ 12`, and a mix of rich and
/// deliberately poor excitation.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let n = rng.gen_range(1..=3);
    let horizon = rng.gen_range(n..=12);
    let len = horizon + 1;

    // monic denominator with rational roots
    let roots: Vec<Q> = (0..n)
        .map(|_| {
            let (a, b) = *ROOTS.choose(rng).unwrap();
            q(a, b)
        })
        .collect();
    let mut den = vec![Q::one()];
    for r in &roots {
        den = poly_mul(&den, &[-r.clone(), Q::one()]);
    }
    let p = den[..n].to_vec();

    let qv: Vec<Q> = if rng.gen_bool(0.2) {
        // numerator sharing a root with the denominator
        let shared = roots[0].clone();
        let rest: Vec<Q> = (0..n).map(|_| random_dyadic(rng, 2)).collect();
        poly_mul(&[-shared, Q::one()], &rest)
    } else {
        (0..=n).map(|_| random_dyadic(rng, 2)).collect()
    };

    let (u, excitation): (Vec<Q>, &'static str) = match rng.gen_range(0..8) {
        0 | 1 => (
            (0..len).map(|_| qi(rng.gen_range(-3..=3))).collect(),
            "random",
        ),
        2 => (vec![qi(rng.gen_range(1..=3)); len], "constant"),
        3 => (
            (0..len)
                .map(|t| qi(if t % 2 == 0 { 1 } else { -1 }))
                .collect(),
            "alternating",
        ),
        4 => {
            let c = rng.gen_range(1..=4);
            (
                (0..len).map(|t| q(c * 8, 1 << t.min(40))).collect(),
                "geometric",
            )
        }
        5 => (
            (0..len).map(|t| qi([1, 0, -1, 0][t % 4])).collect(),
            "quarter-wave",
        ),
        6 => (vec![Q::zero(); len], "zero"),
        _ => {
            let mut u = vec![Q::zero(); len];
            u[rng.gen_range(0..len)] = qi(1);
            (u, "impulse")
        }
    };
    let init: Vec<Q> = (0..n).map(|_| qi(rng.gen_range(-2..=2))).collect();
    let y = simulate_exact(&p, &qv, &u, &init);

    let mut sigmas: Vec<Gq> = vec![
        Gq::real(qi(0)),
        Gq::real(qi(1)),
        Gq::real(qi(-1)),
        Gq::real(q(1, 2)),
        Gq::real(qi(2)),
        Gq::new(qi(0), qi(1)),
        Gq::new(q(1, 2), q(1, 2)),
    ];
    sigmas.shuffle(rng);
    sigmas.truncate(3);
    sigmas.push(Gq::real(roots[rng.gen_range(0..n)].clone()));
    sigmas.push(Gq::new(
        q(rng.gen_range(-4..=4), 4),
        q(rng.gen_range(1..=4), 4),
    ));
    let mut unique: Vec<Gq> = Vec::new();
    for s in sigmas {
        if !unique.contains(&s) {
            unique.push(s);
        }
    }

    Instance {
        n,
        p,
        q: qv,
        u,
        y,
        sigmas: unique,
        excitation,
    }
}

/// Oracle outcome at one point.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleVerdict {
    Informative(Gq),
    NotInformative,
}

/// Solution set of `P(σ) M = Q(σ)` intersected over members.
#[derive(Clone, Debug, PartialEq)]
enum Admissible {
    All,
    Single(Gq),
    Empty,
}

fn eval(coeffs: &[Q], s: &Gq) -> Gq {
    coeffs
        .iter()
        .rev()
        .fold(Gq::zero(), |acc, c| acc.mul(s).add(&Gq::real(c.clone())))
}

/// Decides informativity by enumerating members of the exact data-consistent
/// parameter set. Uses the particular solution, each particular-plus-basis
/// member (these affinely span the set) and random combinations, at least
/// `samples` members in total.
pub fn oracle_verdict<R: Rng>(
    u: &[Q],
    y: &[Q],
    n: usize,
    sigma: &Gq,
    samples: usize,
    rng: &mut R,
) -> OracleVerdict {
    let horizon = u.len() - 1;
    // one equation per t = n..=T:  Σ q_i u_{t-n+i} - Σ p_i y_{t-n+i} = y_t
    // unknown x = [q_0..q_n, p_0..p_{n-1}]
    let a: Vec<Vec<Q>> = (n..=horizon)
        .map(|t| {
            let b = t - n;
            let mut row: Vec<Q> = (0..=n).map(|i| u[b + i].clone()).collect();
            row.extend((0..n).map(|i| -y[b + i].clone()));
            row
        })
        .collect();
    let rhs: Vec<Q> = (n..=horizon).map(|t| y[t].clone()).collect();
    let set = solve_exact(&a, &rhs).expect("data generated by a system is consistent");

    let mut members = vec![set.particular.clone()];
    for v in &set.null_basis {
        members.push(set.particular.iter().zip(v).map(|(x, d)| x + d).collect());
    }
    while members.len() < samples {
        let mut x = set.particular.clone();
        for v in &set.null_basis {
            let c = q(rng.gen_range(-20..=20), rng.gen_range(1..=7));
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi = &*xi + &c * vi;
            }
        }
        members.push(x);
    }

    let mut state = Admissible::All;
    for x in &members {
        let qv = &x[..=n];
        let mut pv: Vec<Q> = x[n + 1..].to_vec();
        pv.push(Q::one());
        let (pval, qval) = (eval(&pv, sigma), eval(qv, sigma));
        let member = if !pval.is_zero() {
            Admissible::Single(qval.div(&pval))
        } else if qval.is_zero() {
            Admissible::All
        } else {
            Admissible::Empty
        };
        state = match (state, member) {
            (Admissible::Empty, _) | (_, Admissible::Empty) => Admissible::Empty,
            (Admissible::All, other) | (other, Admissible::All) => other,
            (Admissible::Single(a), Admissible::Single(b)) => {
                if a == b {
                    Admissible::Single(a)
                } else {
                    Admissible::Empty
                }
            }
        };
    }
    match state {
        Admissible::Single(m) => OracleVerdict::Informative(m),
        _ => OracleVerdict::NotInformative,
    }
}

/// Stable random system of order `n` with poles of modulus below `radius`.
pub fn random_stable_params<R: Rng>(rng: &mut R, n: usize, radius: f64) -> SystemParams {
    random_stable_system(rng, n, radius).0
}

/// As [`random_stable_params`], also returning the poles.
pub fn random_stable_system<R: Rng>(
    rng: &mut R,
    n: usize,
    radius: f64,
) -> (SystemParams, Vec<Complex64>) {
    let mut poles = Vec::with_capacity(n);
    let mut den = vec![Complex64::new(1.0, 0.0)];
    let mut remaining = n;
    while remaining > 0 {
        let roots: Vec<Complex64> = if remaining >= 2 && rng.gen_bool(0.5) {
            let z = Complex64::from_polar(
                rng.gen_range(0.1..radius),
                rng.gen_range(0.2..std::f64::consts::PI - 0.2),
            );
            vec![z, z.conj()]
        } else {
            vec![Complex64::new(rng.gen_range(-radius..radius), 0.0)]
        };
        for r in roots {
            poles.push(r);
            let mut next = vec![Complex64::new(0.0, 0.0); den.len() + 1];
            for (i, c) in den.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            den = next;
            remaining -= 1;
        }
    }
    // den is ascending and monic
    let p: Vec<f64> = den[..n].iter().map(|c| c.re).collect();
    let qv: Vec<f64> = (0..=n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    (SystemParams::new(p, qv).unwrap(), poles)
}

/// Random real model of order `r` with coefficients in `[-2, 2]`.
pub fn random_model<R: Rng>(rng: &mut R, r: usize) -> SystemParams {
    SystemParams::new(
        (0..r).map(|_| rng.gen_range(-2.0..2.0)).collect(),
        (0..=r).map(|_| rng.gen_range(-2.0..2.0)).collect(),
    )
    .unwrap()
}

fn denominator_at(params: &SystemParams, s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for c in params.p().iter().rev() {
        acc = acc * s + c;
    }
    acc
}

/// A random point at least `0.05` from every earlier point and with
/// `|P(σ)| > 1e-2`.
pub fn generic_point<R: Rng>(
    rng: &mut R,
    params: &SystemParams,
    taken: &[Complex64],
    real: bool,
) -> Complex64 {
    loop {
        let s = if real {
            Complex64::new(rng.gen_range(-2.0..2.0), 0.0)
        } else {
            Complex64::from_polar(
                rng.gen_range(0.3..2.0),
                rng.gen_range(0.2..std::f64::consts::PI - 0.2),
            )
        };
        let far = taken
            .iter()
            .all(|t| (t - s).norm() > 0.05 && (t - s.conj()).norm() > 0.05);
        if far && denominator_at(params, s).norm() > 1e-2 {
            return s;
        }
    }
}

/// `count` generic points, closed under conjugation, with a random number
/// of conjugate pairs.
pub fn generic_points<R: Rng>(rng: &mut R, params: &SystemParams, count: usize) -> Vec<Complex64> {
    let pairs = rng.gen_range(0..=count / 2);
    let mut points = Vec::with_capacity(count);
    for _ in 0..pairs {
        let s = generic_point(rng, params, &points, false);
        points.push(s);
        points.push(s.conj());
    }
    while points.len() < count {
        let s = generic_point(rng, params, &points, true);
        points.push(s);
    }
    points
}

/// Transfer value by direct polynomial evaluation.
pub fn direct_transfer(params: &SystemParams, s: Complex64) -> Complex64 {
    let num = params
        .q()
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * s + c);
    num / denominator_at(params, s)
}

/// Smallest-to-largest singular value ratio of the complex interpolation
/// system `b(σ_j) - M_j a(σ_j) = 0` at order `r`, with complex unknowns.
/// A ratio well above rounding level rules out any interpolant of order `r`,
/// real or complex.
pub fn complex_interpolation_conditioning(points: &[(Complex64, Complex64)], r: usize) -> f64 {
    let cols = 2 * r + 2;
    if points.len() < cols {
        return 0.0;
    }
    let m = nalgebra::DMatrix::from_fn(points.len(), cols, |j, c| {
        let (s, val) = points[j];
        if c <= r {
            -val * s.powu(c as u32)
        } else {
            s.powu((c - r - 1) as u32)
        }
    });
    let sv = m.svd(false, false).singular_values;
    let max = sv.max();
    let min = sv.min();
    if max == 0.0 {
        0.0
    } else {
        min / max
    }
}
