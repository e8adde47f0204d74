//! Exact feasibility of `A x = b, x >= 0` by phase-one simplex.
//!
//! The tableau runs over checked `i128` fractions first and falls back to
//! arbitrary precision rationals if any intermediate overflows, so the answer
//! is always exact. Bland's rule keeps the pivoting finite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field operations the tableau needs. `None` means "overflowed".
trait Scalar: Clone + Sized {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn cmp_val(&self, o: &Self) -> Option<std::cmp::Ordering>;
    fn to_big(&self) -> BigRational;
}

/// Reduced fraction with `i128` parts and checked arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Q128 {
    num: i128,
    den: i128,
}

impl Q128 {
    fn new(num: i128, den: i128) -> Option<Q128> {
        if den == 0 {
            return None;
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = n.checked_neg()?;
            d = d.checked_neg()?;
        }
        Some(Q128 { num: n, den: d })
    }
}

impl Scalar for Q128 {
    fn from_i64(v: i64) -> Self {
        Q128 { num: v as i128, den: 1 }
    }
    fn is_zero(&self) -> bool {
        self.num == 0
    }
    fn is_positive(&self) -> bool {
        self.num > 0
    }
    fn is_negative(&self) -> bool {
        self.num < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        if self.den == o.den {
            return Q128::new(self.num.checked_add(o.num)?, self.den);
        }
        let g = self.den.gcd(&o.den);
        let l = (self.den / g).checked_mul(o.den)?;
        let a = self.num.checked_mul(l / self.den)?;
        let b = o.num.checked_mul(l / o.den)?;
        Q128::new(a.checked_add(b)?, l)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.add(&Q128 { num: o.num.checked_neg()?, den: o.den })
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        let g1 = self.num.gcd(&o.den).max(1);
        let g2 = o.num.gcd(&self.den).max(1);
        let n = (self.num / g1).checked_mul(o.num / g2)?;
        let d = (self.den / g2).checked_mul(o.den / g1)?;
        Q128::new(n, d)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if o.num == 0 {
            return None;
        }
        self.mul(&Q128::new(o.den, o.num)?)
    }
    fn cmp_val(&self, o: &Self) -> Option<std::cmp::Ordering> {
        let l = self.num.checked_mul(o.den)?;
        let r = o.num.checked_mul(self.den)?;
        Some(l.cmp(&r))
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn cmp_val(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

/// Outcome of a feasibility query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A basic feasible solution.
    Feasible(Vec<BigRational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn solution(&self) -> Option<&[BigRational]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible => None,
        }
    }
}

/// Decides whether `A x = b` has a non-negative rational solution.
/// `a` is given row-wise; all rows must have the same length.
pub fn feasible(a: &[Vec<i64>], b: &[i64]) -> Feasibility {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    match simplex::<Q128>(a, b) {
        Some(result) => result,
        None => simplex::<BigRational>(a, b).expect("big rationals do not overflow"),
    }
}

fn simplex<T: Scalar>(a: &[Vec<i64>], b: &[i64]) -> Option<Feasibility> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    if m == 0 {
        return Some(Feasibility::Feasible(vec![BigRational::zero(); n]));
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<T>> = Vec::with_capacity(m);
    for (row, &bi) in a.iter().zip(b) {
        let s = if bi < 0 { -1 } else { 1 };
        let mut r = vec![T::from_i64(0); width];
        for (j, &v) in row.iter().enumerate() {
            r[j] = T::from_i64(s * v);
        }
        r[n + t.len()] = T::from_i64(1);
        r[rhs] = T::from_i64(s * bi);
        t.push(r);
    }
    // phase-one objective: minimize the sum of artificials, kept as reduced costs
    let mut cost = vec![T::from_i64(0); width];
    for r in &t {
        for j in 0..n {
            cost[j] = cost[j].sub(&r[j])?;
        }
        cost[rhs] = cost[rhs].sub(&r[rhs])?;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best: Option<T> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = t[i][rhs].div(&t[i][enter])?;
            let better = match &best {
                None => true,
                Some(b) => match ratio.cmp_val(b)? {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => basis[i] < basis[leave.unwrap()],
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        let Some(p) = leave else {
            // unbounded direction cannot occur for a bounded-below objective
            unreachable!("phase-one objective is bounded below by zero");
        };
        pivot(&mut t, &mut cost, p, enter)?;
        basis[p] = enter;
    }

    if !cost[rhs].is_zero() {
        return Some(Feasibility::Infeasible);
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][rhs].to_big();
        }
    }
    Some(Feasibility::Feasible(x))
}

fn pivot<T: Scalar>(t: &mut [Vec<T>], cost: &mut [T], p: usize, q: usize) -> Option<()> {
    let width = t[p].len();
    let piv = t[p][q].clone();
    for j in 0..width {
        if !t[p][j].is_zero() {
            t[p][j] = t[p][j].div(&piv)?;
        }
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == p || row[q].is_zero() {
            continue;
        }
        let f = row[q].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                row[j] = row[j].sub(&f.mul(&prow[j])?)?;
            }
        }
    }
    if !cost[q].is_zero() {
        let f = cost[q].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                cost[j] = cost[j].sub(&f.mul(&prow[j])?)?;
            }
        }
    }
    Some(())
}

/// Checks `A x = b` for `x` exactly.
pub fn satisfies(a: &[Vec<i64>], b: &[i64], x: &[BigRational]) -> bool {
    a.iter().zip(b).all(|(row, &bi)| {
        let lhs: BigRational = row
            .iter()
            .zip(x)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, xi)| xi * BigRational::from_integer(BigInt::from(c)))
            .sum();
        lhs == BigRational::from_integer(BigInt::from(bi))
    }) && x.iter().all(|v| !Signed::is_negative(v))
}

/// `1` as a big rational, for callers building weights.
pub fn one() -> BigRational {
    BigRational::one()
}
