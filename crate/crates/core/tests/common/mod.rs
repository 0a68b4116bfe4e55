//! Shared test support: a dense brute-force oracle over `F_p` and a generator
//! of random small matrix factorizations.
//!
//! The oracle shares nothing with the library's linear algebra. It works in
//! `S/m^N` with plain exponent vectors and reduces modulo `f` only through
//! the span of the truncated multiples `m*f`.
#![allow(dead_code)]

use std::collections::HashMap;

use mfann::catalog::Ring;
use mfann::{Field, MatrixFactorization, PolyMatrix, Polynomial, PrimeField, RingSpec};
use rand::Rng;

pub fn f13() -> PrimeField {
    PrimeField::f13()
}

struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % self.p, self.p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + self.p - c * y % self.p) % self.p;
                }
            }
        }
        v
    }

    /// True when `v` was independent of the rows so far.
    fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&c| c != 0) else { return false };
        let inv = self.inv(v[piv]);
        for x in v.iter_mut() {
            *x = *x * inv % self.p;
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x = (*x + self.p - c * y % self.p) % self.p;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

type Dense = HashMap<Vec<u32>, u64>;

/// `S/m^N` as dense vectors indexed by monomials of degree `< N`.
pub struct DenseOracle {
    p: u64,
    level: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    f: Dense,
}

fn exps_below(nvars: usize, level: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..nvars {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..level.saturating_sub(used) {
                let mut e2 = e.clone();
                e2.push(k);
                next.push(e2);
            }
        }
        out = next;
    }
    out
}

impl DenseOracle {
    pub fn new(spec: &RingSpec<PrimeField>, level: u32) -> Self {
        let p = spec.field().modulus();
        let monomials = exps_below(spec.nvars(), level);
        let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        DenseOracle { p, level, monomials, index, f: Self::dense(spec.equation()) }
    }

    fn dense(q: &Polynomial<PrimeField>) -> Dense {
        q.terms().map(|(m, c)| (m.exponents().to_vec(), *c)).collect()
    }

    fn mul(&self, a: &Dense, b: &Dense) -> Dense {
        let mut out = Dense::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                if m.iter().sum::<u32>() < self.level {
                    let e = out.entry(m).or_insert(0);
                    *e = (*e + ca * cb) % self.p;
                }
            }
        }
        out
    }

    fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Writes `q` into block `slot` of a vector with `blocks` blocks.
    fn place(&self, q: &Dense, slot: usize, blocks: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim() * blocks];
        for (m, c) in q {
            if *c != 0 {
                v[slot * self.dim() + self.index[m]] = *c;
            }
        }
        v
    }

    /// Truncated multiples of `f`: the kernel of `S/m^N -> R_N`.
    fn relations(&self) -> Vec<Dense> {
        self.monomials.iter().map(|m| self.mul(&Dense::from([(m.clone(), 1)]), &self.f)).collect()
    }

    /// Span of `phi*alpha + beta*psi` plus `M_n(relations)` in `M_n(S/m^N)`.
    fn image(&self, mf: &MatrixFactorization<PrimeField>) -> Echelon {
        let n = mf.size();
        let phi: Vec<Dense> = mf.phi().entries().iter().map(Self::dense).collect();
        let psi: Vec<Dense> = mf.psi().entries().iter().map(Self::dense).collect();
        let mut ech = Echelon::new(self.p);
        for u in &self.monomials {
            let u = Dense::from([(u.clone(), 1)]);
            for k in 0..n {
                for j in 0..n {
                    // alpha = u*E_kj fills column j with phi[., k]*u.
                    let mut v = vec![0; self.dim() * n * n];
                    for i in 0..n {
                        add_into(&mut v, &self.place(&self.mul(&phi[i * n + k], &u), i * n + j, n * n), self.p);
                    }
                    ech.insert(v);
                    // beta = u*E_jk fills row j with u*psi[k, .].
                    let mut v = vec![0; self.dim() * n * n];
                    for i in 0..n {
                        add_into(&mut v, &self.place(&self.mul(&u, &psi[k * n + i]), j * n + i, n * n), self.p);
                    }
                    ech.insert(v);
                }
            }
        }
        for rel in self.relations() {
            for slot in 0..n * n {
                ech.insert(self.place(&rel, slot, n * n));
            }
        }
        ech
    }

    fn scalar(&self, r: &Dense, n: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim() * n * n];
        for i in 0..n {
            add_into(&mut v, &self.place(r, i * n + i, n * n), self.p);
        }
        v
    }

    /// `r*I` lies in the truncated image.
    pub fn contains(&self, mf: &MatrixFactorization<PrimeField>, r: &Polynomial<PrimeField>) -> bool {
        let ech = self.image(mf);
        let r = self.mul(&Self::dense(r), &Dense::from([(vec![0; self.monomials[0].len()], 1)]));
        ech.reduce(self.scalar(&r, mf.size())).iter().all(|&c| c == 0)
    }

    /// `dim_k R_N`.
    pub fn ring_dim(&self) -> usize {
        let mut ech = Echelon::new(self.p);
        for rel in self.relations() {
            ech.insert(self.place(&rel, 0, 1));
        }
        self.dim() - ech.rank()
    }

    /// `dim_k` of the truncated annihilator inside `R_N`.
    pub fn ann_dim(&self, mf: &MatrixFactorization<PrimeField>) -> usize {
        let n = mf.size();
        let mut ech = self.image(mf);
        let before = ech.rank();
        for m in &self.monomials {
            ech.insert(self.scalar(&Dense::from([(m.clone(), 1)]), n));
        }
        let outside = ech.rank() - before;
        self.ring_dim() - outside
    }

    /// `dim_k R_N / I R_N`.
    pub fn colength(&self, gens: &[Polynomial<PrimeField>]) -> usize {
        let mut ech = Echelon::new(self.p);
        for rel in self.relations() {
            ech.insert(self.place(&rel, 0, 1));
        }
        for g in gens {
            let g = Self::dense(g);
            for m in &self.monomials {
                ech.insert(self.place(&self.mul(&g, &Dense::from([(m.clone(), 1)])), 0, 1));
            }
        }
        self.dim() - ech.rank()
    }
}

fn add_into(v: &mut [u64], w: &[u64], p: u64) {
    for (x, y) in v.iter_mut().zip(w) {
        *x = (*x + y) % p;
    }
}

/// Rings used for random factorizations, with a truncation level small
/// enough for the dense oracle.
pub const RANDOM_RINGS: [(Ring, u32); 3] = [(Ring::AInf1, 6), (Ring::DInf1, 6), (Ring::AInf2, 5)];

/// `1x1` factorizations `(a, f/a)`.
fn rank_one(ring: Ring) -> &'static [(&'static str, &'static str)] {
    match ring {
        Ring::AInf1 => &[("x", "x"), ("x^2", "1"), ("1", "x^2")],
        Ring::AInf2 => &[("z - i*x", "z + i*x"), ("z + i*x", "z - i*x"), ("x^2 + z^2", "1")],
        Ring::DInf1 => &[("x", "x*y"), ("x*y", "x"), ("y", "x^2"), ("x^2", "y"), ("x^2*y", "1")],
        Ring::DInf2 => &[("x^2*y + z^2", "1")],
    }
}

fn pool(ring: Ring, k: &PrimeField) -> Vec<MatrixFactorization<PrimeField>> {
    let spec = ring.spec(k).unwrap();
    let mut out: Vec<_> = ring.entries(k, 3).unwrap().into_iter().map(|e| e.mf).collect();
    for (a, b) in rank_one(ring) {
        let mf = MatrixFactorization::parse(&spec, &[&[a]], &[&[b]], &format!("({a}, {b})")).unwrap();
        out.push(mf);
    }
    out
}

/// Product of elementary matrices `I + c*m*E_ij` and its inverse.
fn elementary_pair<R: Rng>(rng: &mut R, spec: &RingSpec<PrimeField>, n: usize) -> (PolyMatrix<PrimeField>, PolyMatrix<PrimeField>) {
    let mut p = PolyMatrix::identity(spec, n);
    let mut p_inv = PolyMatrix::identity(spec, n);
    if n < 2 {
        return (p, p_inv);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rng.gen_range(1..13) as i64;
        let var = rng.gen_range(0..=spec.nvars());
        let m = if var == spec.nvars() { Polynomial::one(spec.field(), spec.nvars()) } else { spec.var(var) };
        let t = m.scale(&spec.field().from_i64(c));
        let mut e = PolyMatrix::identity(spec, n);
        e.set(i, j, t.clone());
        let mut e_inv = PolyMatrix::identity(spec, n);
        e_inv.set(i, j, -&t);
        p = p.mul(&e).unwrap();
        p_inv = e_inv.mul(&p_inv).unwrap();
    }
    (p, p_inv)
}

/// A random factorization of size `<= 4`: a catalog entry or rank-one pair,
/// possibly summed with another, then conjugated by unimodular matrices.
pub fn random_mf<R: Rng>(rng: &mut R, ring: Ring) -> MatrixFactorization<PrimeField> {
    let k = f13();
    let pool = pool(ring, &k);
    let mut mf = pool[rng.gen_range(0..pool.len())].clone();
    if rng.gen_bool(0.4) {
        let other = &pool[rng.gen_range(0..pool.len())];
        if mf.size() + other.size() <= 4 {
            mf = mf.direct_sum(other).unwrap();
        }
    }
    conjugate(rng, &mf)
}

/// `(P*phi*Q, Q^-1*psi*P^-1)` for random unimodular `P`, `Q`.
pub fn conjugate<R: Rng>(rng: &mut R, mf: &MatrixFactorization<PrimeField>) -> MatrixFactorization<PrimeField> {
    let spec = mf.spec();
    let n = mf.size();
    let (p, p_inv) = elementary_pair(rng, spec, n);
    let (q, q_inv) = elementary_pair(rng, spec, n);
    let phi = p.mul(mf.phi()).unwrap().mul(&q).unwrap();
    let psi = q_inv.mul(mf.psi()).unwrap().mul(&p_inv).unwrap();
    MatrixFactorization::new(spec, phi, psi, format!("conj({})", mf.label())).unwrap()
}

/// Catalog entries with `n <= 3` and the rank-one factorizations of a ring.
pub fn base_pool(ring: Ring) -> Vec<MatrixFactorization<PrimeField>> {
    pool(ring, &f13())
}

/// Outcome of the five structural laws on one factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Laws {
    pub swap: bool,
    pub direct_sum: bool,
    pub monotone: bool,
    pub row_col: bool,
    pub witness_agrees: bool,
}

impl Laws {
    pub fn all(&self) -> bool {
        self.swap && self.direct_sum && self.monotone && self.row_col && self.witness_agrees
    }
}

/// Checks the laws for `mf`, using `other` as the second summand and `probe`
/// as a test element for the negative direction of witness agreement.
pub fn check_laws(
    mf: &MatrixFactorization<PrimeField>,
    other: &MatrixFactorization<PrimeField>,
    probe: &Polynomial<PrimeField>,
    level: u32,
) -> Laws {
    use mfann::annihilator::{annihilate, annihilator_truncated, membership_truncated, row_col_bound_at, witness_search, Solvability};
    use mfann::linalg::Subspace;
    use mfann::TruncatedAlgebra;

    let alg = TruncatedAlgebra::build(mf.spec(), level).unwrap();
    let ann = annihilator_truncated(mf, &alg).unwrap().subspace;
    let swap = annihilator_truncated(&mf.swap(), &alg).unwrap().subspace == ann;
    let ann_other = annihilator_truncated(other, &alg).unwrap().subspace;
    let direct_sum =
        annihilator_truncated(&mf.direct_sum(other).unwrap(), &alg).unwrap().subspace == ann.intersection(&ann_other).unwrap();
    let higher = TruncatedAlgebra::build(mf.spec(), level + 1).unwrap();
    let up = annihilator_truncated(mf, &higher).unwrap().subspace;
    let projected = Subspace::image(&higher.projection_to(&alg).unwrap(), &up).unwrap();
    let monotone = projected.is_subspace_of(&ann).unwrap();
    let row_col = ann.is_subspace_of(&row_col_bound_at(mf, &alg).unwrap()).unwrap();

    let result = annihilate(mf, level, 3).unwrap();
    let deeper = TruncatedAlgebra::build(mf.spec(), level + 2).unwrap();
    let mut witness_agrees = result.lower.iter().all(|w| {
        w.verify(mf)
            && membership_truncated(mf, &w.r, &alg).unwrap() == Solvability::Solvable
            && membership_truncated(mf, &w.r, &deeper).unwrap() == Solvability::Solvable
    });
    if membership_truncated(mf, probe, &alg).unwrap() == Solvability::Unsolvable {
        witness_agrees &= witness_search(mf, probe, 2).unwrap().is_none();
    }
    Laws { swap, direct_sum, monotone, row_col, witness_agrees }
}

/// A random polynomial of degree `<= 2` in the ring's variables.
pub fn random_poly<R: Rng>(rng: &mut R, spec: &RingSpec<PrimeField>) -> Polynomial<PrimeField> {
    let k = spec.field();
    let mut q = Polynomial::zero(k, spec.nvars());
    for _ in 0..rng.gen_range(1..=3) {
        let mut t = Polynomial::one(k, spec.nvars()).scale(&k.from_i64(rng.gen_range(1..13)));
        for _ in 0..rng.gen_range(0..=2) {
            t = &t * &spec.var(rng.gen_range(0..spec.nvars()));
        }
        q = &q + &t;
    }
    q
}
