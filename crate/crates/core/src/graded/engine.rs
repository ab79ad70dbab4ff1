//! Integer span arithmetic for closures and invariance sweeps.
//!
//! Every action matrix has the form `c·I + D` with `D` integral and `c`
//! rational, so after clearing the denominator of `c` an image of an integer
//! vector stays integral. Spans are kept as primitive integer rows in reduced
//! echelon shape. The word-sized instance reports overflow and the caller
//! retries with big integers.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{Scalar, Vector};

pub(crate) trait EInt: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn from_i64(x: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn to_scalar(&self) -> Scalar;
}

impl EInt for i64 {
    fn zero() -> Self {
        0
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64().filter(|&x| x != i64::MIN)
    }
    fn from_i64(x: i64) -> Self {
        x
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::from_int(*self)
    }
}

impl EInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::from(self.clone())
    }
}

/// Divides out the content and makes the leading entry positive.
fn make_primitive<T: EInt>(v: &mut [T]) -> Option<()> {
    let mut g = T::zero();
    let mut lead_neg = None;
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if lead_neg.is_none() {
                lead_neg = Some(x.is_negative());
            }
        }
    }
    let Some(neg) = lead_neg else { return Some(()) };
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = x.div(&g);
            if neg {
                *x = x.neg()?;
            }
        }
    }
    Some(())
}

/// `a·v - b·w`, entrywise.
fn combine<T: EInt>(a: &T, v: &mut [T], b: &T, w: &[T]) -> Option<()> {
    for (x, y) in v.iter_mut().zip(w) {
        if y.is_zero() {
            if !x.is_zero() {
                *x = a.mul(x)?;
            }
        } else {
            *x = a.mul(x)?.sub(&b.mul(y)?)?;
        }
    }
    Some(())
}

/// A subspace stored as primitive integer rows; each row is zero at every
/// other row's pivot.
#[derive(Clone, Debug)]
pub(crate) struct IntSpan<T> {
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: EInt> IntSpan<T> {
    pub fn new() -> Self {
        IntSpan { rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    /// The residual of `v` after eliminating all pivots; zero iff `v` is in the span.
    pub fn reduce(&self, mut v: Vec<T>) -> Option<Vec<T>> {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc].is_zero() {
                continue;
            }
            let g = row[pc].gcd(&v[pc]);
            let a = row[pc].div(&g);
            let b = v[pc].div(&g);
            combine(&a, &mut v, &b, row)?;
        }
        make_primitive(&mut v)?;
        Some(v)
    }

    /// Adds an already reduced, nonzero residual.
    pub fn insert_reduced(&mut self, v: Vec<T>) -> Option<()> {
        let q = v.iter().position(|x| !x.is_zero()).expect("residual is nonzero");
        for row in self.rows.iter_mut() {
            if row[q].is_zero() {
                continue;
            }
            let g = v[q].gcd(&row[q]);
            let a = v[q].div(&g);
            let b = row[q].div(&g);
            combine(&a, row, &b, &v)?;
            make_primitive(row)?;
        }
        self.rows.push(v);
        self.pivots.push(q);
        Some(())
    }

    /// Inserts `v`; returns the residual that was added, if any.
    pub fn insert(&mut self, v: Vec<T>) -> Option<Option<Vec<T>>> {
        let r = self.reduce(v)?;
        if r.iter().all(EInt::is_zero) {
            return Some(None);
        }
        self.insert_reduced(r.clone())?;
        Some(Some(r))
    }

    pub fn to_vectors(&self) -> Vec<Vector> {
        self.rows.iter().map(|r| Vector(r.iter().map(EInt::to_scalar).collect())).collect()
    }
}

/// Clears denominators of a rational vector.
pub(crate) fn integerise(v: &Vector) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::from(1), |acc, x| acc.lcm(&x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

pub(crate) fn convert<T: EInt>(v: &[BigInt]) -> Option<Vec<T>> {
    v.iter().map(T::from_big).collect()
}

/// One generator prepared for the engine, scaled by a common denominator:
/// a fiber vector `w` at degree `k` maps to `((coeff|k) + cnum)·w + D w` at
/// degree `k + shift`.
#[derive(Clone, Debug)]
pub(crate) struct PreparedGen {
    pub shift: Vec<i64>,
    pub coeff: Vec<BigInt>,
    pub cnum: BigInt,
    /// Columns of `D` as `(row, value)` lists.
    pub dcols: Vec<Vec<(usize, BigInt)>>,
}

struct GenT<T> {
    shift: Vec<i64>,
    offset: i64,
    coeff: Vec<T>,
    cnum: T,
    dcols: Vec<Vec<(usize, T)>>,
}

/// Lexicographic layout of a cubical window `[-d, d]^N`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub n: usize,
    pub d: i64,
    pub coords: Vec<Vec<i64>>,
}

impl Layout {
    pub fn new(n: usize, d: i64) -> Self {
        let side = (2 * d + 1) as usize;
        let count = side.pow(n as u32);
        let mut coords = Vec::with_capacity(count);
        for mut idx in 0..count {
            let mut c = vec![0i64; n];
            for i in (0..n).rev() {
                c[i] = (idx % side) as i64 - d;
                idx /= side;
            }
            coords.push(c);
        }
        Layout { n, d, coords }
    }

    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        let side = 2 * self.d + 1;
        let mut idx = 0i64;
        for &x in k {
            if x.abs() > self.d {
                return None;
            }
            idx = idx * side + (x + self.d);
        }
        Some(idx as usize)
    }

    fn offset(&self, shift: &[i64]) -> i64 {
        let side = 2 * self.d + 1;
        shift.iter().fold(0, |acc, &x| acc * side + x)
    }

    pub fn target(&self, from: usize, shift: &[i64], offset: i64) -> Option<usize> {
        let k = &self.coords[from];
        for (a, b) in k.iter().zip(shift) {
            if (a + b).abs() > self.d {
                return None;
            }
        }
        Some((from as i64 + offset) as usize)
    }
}

fn prepare<T: EInt>(layout: &Layout, gens: &[PreparedGen]) -> Option<Vec<GenT<T>>> {
    gens.iter()
        .map(|g| {
            Some(GenT {
                shift: g.shift.clone(),
                offset: layout.offset(&g.shift),
                coeff: convert(&g.coeff)?,
                cnum: T::from_big(&g.cnum)?,
                dcols: g
                    .dcols
                    .iter()
                    .map(|col| col.iter().map(|(r, v)| Some((*r, T::from_big(v)?))).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>()?,
            })
        })
        .collect()
}

/// Scaled image of `w` at degree coordinates `k`. `None` on overflow.
fn apply<T: EInt>(g: &GenT<T>, k: &[i64], w: &[T]) -> Option<Vec<T>> {
    let mut ck = T::zero();
    for (a, &x) in g.coeff.iter().zip(k) {
        if !a.is_zero() && x != 0 {
            ck = ck.add(&a.mul(&T::from_i64(x))?)?;
        }
    }
    let c = ck.add(&g.cnum)?;
    let mut out: Vec<T> = if c.is_zero() { vec![T::zero(); w.len()] } else { w.iter().map(|x| c.mul(x)).collect::<Option<_>>()? };
    for (j, x) in w.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (r, v) in &g.dcols[j] {
            out[*r] = out[*r].add(&v.mul(x)?)?;
        }
    }
    Some(out)
}

/// Outcome of an integer closure run.
pub(crate) struct ClosureRun {
    pub spans: Vec<Vec<Vector>>,
    /// Degree index where a reference vector was reached, if the run stopped early.
    pub reached: Option<usize>,
}

/// When a closure run may stop before the worklist is empty.
#[derive(Default)]
pub(crate) struct Stop<'a> {
    /// stop once every fiber has this dimension
    pub caps: Option<&'a [usize]>,
    /// stop once some fiber contains one of its reference vectors
    pub refs: Option<&'a [Vec<Vec<BigInt>>]>,
}

fn closure_typed<T: EInt>(
    layout: &Layout,
    dim: usize,
    gens: &[PreparedGen],
    seeds: &[(usize, Vec<BigInt>)],
    stop: &Stop<'_>,
) -> Option<ClosureRun> {
    let gens: Vec<GenT<T>> = prepare(layout, gens)?;
    let count = layout.coords.len();
    let refs: Option<Vec<Vec<Vec<T>>>> = match stop.refs {
        Some(rs) => Some(rs.iter().map(|r| r.iter().map(|v| convert(v)).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>()?),
        None => None,
    };
    let caps = stop.caps;
    let mut spans: Vec<IntSpan<T>> = (0..count).map(|_| IntSpan::new()).collect();
    let mut queue: VecDeque<(usize, Vec<T>)> = VecDeque::new();
    let mut saturated = 0usize;
    let at_cap = |spans: &Vec<IntSpan<T>>, i: usize| caps.is_some_and(|c| spans[i].dim() == c[i]);
    let hits_ref = |spans: &Vec<IntSpan<T>>, i: usize| -> Option<bool> {
        let Some(rs) = refs.as_ref() else { return Some(false) };
        for u in &rs[i] {
            if spans[i].reduce(u.clone())?.iter().all(EInt::is_zero) {
                return Some(true);
            }
        }
        Some(false)
    };
    let finish = |spans: &Vec<IntSpan<T>>, reached| ClosureRun { spans: spans.iter().map(IntSpan::to_vectors).collect(), reached };
    for (idx, v) in seeds {
        debug_assert_eq!(v.len(), dim);
        let was = at_cap(&spans, *idx);
        if let Some(r) = spans[*idx].insert(convert(v)?)? {
            queue.push_back((*idx, r));
            if hits_ref(&spans, *idx)? {
                return Some(finish(&spans, Some(*idx)));
            }
        }
        if !was && at_cap(&spans, *idx) {
            saturated += 1;
        }
    }
    while let Some((from, w)) = queue.pop_front() {
        if caps.is_some() && saturated == count {
            break;
        }
        let k = &layout.coords[from];
        for g in &gens {
            let Some(to) = layout.target(from, &g.shift, g.offset) else { continue };
            if at_cap(&spans, to) {
                continue;
            }
            let img = apply(g, k, &w)?;
            if img.iter().all(EInt::is_zero) {
                continue;
            }
            if let Some(r) = spans[to].insert(img)? {
                queue.push_back((to, r));
                if at_cap(&spans, to) {
                    saturated += 1;
                }
                if hits_ref(&spans, to)? {
                    return Some(finish(&spans, Some(to)));
                }
            }
        }
    }
    Some(finish(&spans, None))
}

/// Smallest generator-stable family containing the seeds, restricted to the
/// window, unless `stop` ends the run first.
pub(crate) fn closure(
    layout: &Layout,
    dim: usize,
    gens: &[PreparedGen],
    seeds: &[(usize, Vec<BigInt>)],
    stop: &Stop<'_>,
) -> ClosureRun {
    closure_typed::<i64>(layout, dim, gens, seeds, stop)
        .or_else(|| closure_typed::<BigInt>(layout, dim, gens, seeds, stop))
        .expect("big integer closure cannot overflow")
}

/// First `(source index, generator index, basis vector)` whose image leaves
/// the family, with the number of in-window pairs checked and skipped per
/// source degree.
pub(crate) struct SweepRun {
    pub failures: Vec<(usize, usize)>,
    pub checked: Vec<usize>,
    pub skipped: Vec<usize>,
}

fn sweep_typed<T: EInt>(layout: &Layout, gens: &[PreparedGen], family: &[Vec<Vec<BigInt>>]) -> Option<SweepRun> {
    let gens: Vec<GenT<T>> = prepare(layout, gens)?;
    let mut spans: Vec<IntSpan<T>> = Vec::with_capacity(family.len());
    for basis in family {
        let mut s = IntSpan::new();
        for v in basis {
            s.insert(convert(v)?)?;
        }
        spans.push(s);
    }
    let count = layout.coords.len();
    let mut failures = Vec::new();
    let mut checked = vec![0; count];
    let mut skipped = vec![0; count];
    for from in 0..count {
        let k = &layout.coords[from];
        for (gi, g) in gens.iter().enumerate() {
            let Some(to) = layout.target(from, &g.shift, g.offset) else {
                skipped[from] += 1;
                continue;
            };
            checked[from] += 1;
            for w in spans[from].rows() {
                let img = apply(g, k, w)?;
                let r = spans[to].reduce(img)?;
                if !r.iter().all(EInt::is_zero) {
                    failures.push((from, gi));
                    break;
                }
            }
        }
    }
    Some(SweepRun { failures, checked, skipped })
}

/// Checks every in-window `(degree, generator)` pair of a family.
pub(crate) fn sweep(layout: &Layout, gens: &[PreparedGen], family: &[Vec<Vec<BigInt>>]) -> SweepRun {
    sweep_typed::<i64>(layout, gens, family)
        .or_else(|| sweep_typed::<BigInt>(layout, gens, family))
        .expect("big integer sweep cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_insert_and_reduce() {
        let mut s: IntSpan<i64> = IntSpan::new();
        assert!(s.insert(vec![2, 4, 0]).unwrap().is_some());
        assert!(s.insert(vec![1, 2, 0]).unwrap().is_none());
        assert!(s.insert(vec![0, 3, 3]).unwrap().is_some());
        assert_eq!(s.dim(), 2);
        assert!(s.reduce(vec![1, 5, 3]).unwrap().iter().all(|x| *x == 0));
    }

    #[test]
    fn overflow_is_reported() {
        let mut s: IntSpan<i64> = IntSpan::new();
        s.insert(vec![1, i64::MAX - 1]).unwrap();
        assert!(s.reduce(vec![i64::MAX - 3, 5]).is_none());
    }

    #[test]
    fn layout_round_trip() {
        let l = Layout::new(3, 2);
        assert_eq!(l.coords.len(), 125);
        for (i, c) in l.coords.iter().enumerate() {
            assert_eq!(l.index_of(c), Some(i));
        }
        let from = l.index_of(&[0, 1, -2]).unwrap();
        let off = l.offset(&[1, 1, 0]);
        assert_eq!(l.target(from, &[1, 1, 0], off), l.index_of(&[1, 2, -2]));
        assert_eq!(l.target(from, &[0, 2, 0], l.offset(&[0, 2, 0])), None);
    }
}
