//! Finite fields GF(p^k), projective spaces PG(d,q) and the cross-ratio.
//!
//! Field elements are indices `0..q`: the element `c_0 + c_1 w + .. +
//! c_{k-1} w^{k-1}` has index `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`, where `w`
//! is the class of `x` modulo the field's modulus. Index 0 is zero and index
//! 1 is one.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::FieldError;
use crate::incidence::{IncidenceSystem, SystemBuilder};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;

/// Largest field order accepted by [`FiniteField::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Largest number of points accepted by [`ProjectiveSpace::new`].
pub const MAX_POINTS: usize = 100_000;

pub type FieldElement = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients `c_0..c_k` of the monic modulus.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Polynomials over GF(p) as coefficient vectors, lowest degree first.
fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let f = top * lead_inv % p;
            let shift = a.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - f * c % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn pow_mod(mut b: u32, mut e: u32, m: u32) -> u32 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d);
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// GF(p^k) with the smallest monic irreducible modulus, ordering
    /// moduli by the index of their non-leading part.
    pub fn new(p: u32, k: u32) -> Result<FiniteField, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(FieldError::FieldTooLarge { p, k })? as u32;
        let kk = k as usize;
        let modulus = (0..p.pow(k))
            .map(|low| {
                let mut f = digits(low, p, kk);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .expect("irreducible polynomials exist in every degree");

        let poly_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a, p, kk), digits(b, p, kk));
            let mut prod = vec![0u32; 2 * kk];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let r = poly_rem(prod, &modulus, p);
            r.iter().rev().fold(0, |acc, &c| acc * p + c)
        };
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        exp[0] = 1;
        for g in 2..q {
            let mut x = 1u32;
            for slot in exp.iter_mut() {
                *slot = x;
                x = poly_mul(x, g);
            }
            let mut seen = vec![false; q as usize];
            if exp.iter().all(|&e| !std::mem::replace(&mut seen[e as usize], true)) {
                break;
            }
        }
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        Ok(FiniteField {
            p,
            k,
            q,
            modulus,
            exp,
            log,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        0..self.q
    }

    /// The class of `x`, printed as `w`.
    pub fn generator(&self) -> FieldElement {
        if self.k == 1 {
            self.primitive_element()
        } else {
            self.p
        }
    }

    /// A multiplicative generator.
    pub fn primitive_element(&self) -> FieldElement {
        self.exp[1 % self.exp.len()]
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut r, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            r += (a % self.p + b % self.p) % self.p * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let (mut a, mut r, mut place) = (a, 0, 1);
        while a > 0 {
            r += (self.p - a % self.p) % self.p * place;
            a /= self.p;
            place *= self.p;
        }
        r
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.exp.len() as u32;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    /// Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a != 0, "zero has no inverse");
        let n = self.exp.len() as u32;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.exp.len() as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, x: FieldElement) -> FieldElement {
        self.pow(x, self.p as u64)
    }

    /// `[x, x^p, x^{p^2}, ..]` until the first repetition.
    pub fn frobenius_orbit(&self, x: FieldElement) -> Vec<FieldElement> {
        let mut orbit = vec![x];
        let mut y = self.frobenius(x);
        while y != x {
            orbit.push(y);
            y = self.frobenius(y);
        }
        orbit
    }

    /// Whether `x` lies in the subfield GF(p^base_degree).
    pub fn in_subfield(&self, x: FieldElement, base_degree: u32) -> bool {
        self.pow(x, (self.p as u64).pow(base_degree)) == x
    }

    pub fn check_subfield(&self, base_degree: u32) -> Result<(), FieldError> {
        if base_degree == 0 || self.k % base_degree != 0 {
            return Err(FieldError::BadSubfield {
                base: base_degree,
                degree: self.k,
            });
        }
        Ok(())
    }

    /// Polynomial in `w`, highest degree first: `0`, `1`, `w`, `w+1`,
    /// `2w^2+1`.
    pub fn display(&self, x: FieldElement) -> String {
        if x == 0 {
            return "0".into();
        }
        let coeffs = digits(x, self.p, self.k as usize);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}w"),
                _ => format!("{coef}w^{i}"),
            });
        }
        terms.join("+")
    }

    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join("+")
    }

    /// Scales `v` so its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        let lead = *v.iter().find(|&&c| c != 0).ok_or(FieldError::ZeroVector)?;
        let s = self.inv(lead);
        Ok(v.iter().map(|&c| self.mul(c, s)).collect())
    }

    /// Reduced row echelon form, zero rows dropped.
    pub fn rref(&self, rows: &[Vec<FieldElement>]) -> Vec<Vec<FieldElement>> {
        let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(pivot) = (r..m.len()).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, pivot);
            let s = self.inv(m[r][c]);
            for x in m[r].iter_mut() {
                *x = self.mul(*x, s);
            }
            for i in 0..m.len() {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for j in 0..cols {
                        let t = self.mul(f, m[r][j]);
                        m[i][j] = self.sub(m[i][j], t);
                    }
                }
            }
            r += 1;
        }
        m.truncate(r);
        m
    }

    fn det2(&self, a: (FieldElement, FieldElement), b: (FieldElement, FieldElement)) -> FieldElement {
        self.sub(self.mul(a.0, b.1), self.mul(a.1, b.0))
    }

    /// `[p1:p2; p3:p4] = (|p1 p3|·|p2 p4|) / (|p2 p3|·|p1 p4|)`, with
    /// coordinates taken in the echelon basis of the common line.
    pub fn cross_ratio(&self, pts: [&[FieldElement]; 4]) -> Result<FieldElement, FieldError> {
        let len = pts[0].len();
        let mut normal = Vec::with_capacity(4);
        for p in pts {
            if p.len() != len {
                return Err(FieldError::BadCoordinates {
                    expected: len,
                    found: p.len(),
                });
            }
            normal.push(self.normalize(p)?);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if normal[i] == normal[j] {
                    return Err(FieldError::NotDistinct);
                }
            }
        }
        let basis = self.rref(&normal);
        if basis.len() != 2 {
            return Err(FieldError::NotCollinear);
        }
        let pivots: Vec<usize> = basis
            .iter()
            .map(|row| row.iter().position(|&c| c != 0).unwrap())
            .collect();
        let c: Vec<(FieldElement, FieldElement)> =
            pts.iter().map(|p| (p[pivots[0]], p[pivots[1]])).collect();
        let num = self.mul(self.det2(c[0], c[2]), self.det2(c[1], c[3]));
        let den = self.mul(self.det2(c[1], c[2]), self.det2(c[0], c[3]));
        Ok(self.div(num, den))
    }
}

/// A subspace of PG(d,q): echelon basis and sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Vec<Vec<FieldElement>>,
    pub points: Vec<usize>,
}

impl Subspace {
    pub fn dimension(&self) -> usize {
        self.basis.len() - 1
    }
}

/// PG(d,q) with all subspaces of projective dimension `0..d`.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: FiniteField,
    d: usize,
    /// `subspaces[j]` holds the subspaces of projective dimension `j`,
    /// sorted by basis.
    subspaces: Vec<Vec<Subspace>>,
    point_index: HashMap<Vec<FieldElement>, usize>,
    by_points: Vec<HashMap<Vec<usize>, usize>>,
}

fn echelon_bases(field: &FiniteField, n: usize, r: usize) -> Vec<Vec<Vec<FieldElement>>> {
    let q = field.order();
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..r).collect();
    loop {
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| {
                let pv = &pivots;
                (pv[i] + 1..n)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![0; n]; r];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            for &(i, c) in &free {
                rows[i][c] = (code % q as u64) as u32;
                code /= q as u64;
            }
            out.push(rows);
        }
        let Some(i) = (0..r).rev().find(|&i| pivots[i] < n - r + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..r {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out.sort();
    out
}

impl ProjectiveSpace {
    pub fn new(field: &FiniteField, d: usize) -> Result<ProjectiveSpace, FieldError> {
        if d == 0 {
            return Err(FieldError::BadDimension);
        }
        let q = field.order() as u128;
        let count = (q.pow(d as u32 + 1) - 1) / (q - 1);
        if count > MAX_POINTS as u128 {
            return Err(FieldError::TooManyPoints {
                points: count.min(usize::MAX as u128) as usize,
                limit: MAX_POINTS,
            });
        }
        let n = d + 1;
        let point_vecs: Vec<Vec<FieldElement>> = echelon_bases(field, n, 1)
            .into_iter()
            .map(|mut b| b.pop().unwrap())
            .collect();
        let point_index: HashMap<Vec<FieldElement>, usize> = point_vecs
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut space = ProjectiveSpace {
            field: field.clone(),
            d,
            subspaces: Vec::new(),
            point_index,
            by_points: Vec::new(),
        };
        for r in 1..=d {
            let subs: Vec<Subspace> = echelon_bases(field, n, r)
                .into_iter()
                .map(|basis| {
                    let points = space.span_points(&basis);
                    Subspace { basis, points }
                })
                .collect();
            space
                .by_points
                .push(subs.iter().enumerate().map(|(i, s)| (s.points.clone(), i)).collect());
            space.subspaces.push(subs);
        }
        Ok(space)
    }

    fn span_points(&self, basis: &[Vec<FieldElement>]) -> Vec<usize> {
        let f = &self.field;
        let q = f.order() as u64;
        let r = basis.len();
        let n = self.d + 1;
        let mut pts = Vec::new();
        for code in 1..q.pow(r as u32) {
            let coeffs = digits(code as u32, q as u32, r);
            let mut v = vec![0; n];
            for (i, &c) in coeffs.iter().enumerate() {
                for j in 0..n {
                    v[j] = f.add(v[j], f.mul(c, basis[i][j]));
                }
            }
            if let Ok(v) = f.normalize(&v) {
                pts.push(self.point_index[&v]);
            }
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Projective dimension `d`.
    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn subspaces(&self, dim: usize) -> &[Subspace] {
        &self.subspaces[dim]
    }

    pub fn point_count(&self) -> usize {
        self.subspaces[0].len()
    }

    pub fn point(&self, i: usize) -> &[FieldElement] {
        &self.subspaces[0][i].basis[0]
    }

    pub fn point_id(&self, v: &[FieldElement]) -> Result<usize, FieldError> {
        let v = self.field.normalize(v)?;
        self.point_index.get(&v).copied().ok_or(FieldError::BadCoordinates {
            expected: self.d + 1,
            found: v.len(),
        })
    }

    /// Subspace of dimension `dim` with exactly these points.
    pub fn subspace_id(&self, dim: usize, points: &[usize]) -> Option<usize> {
        self.by_points.get(dim)?.get(points).copied()
    }

    /// The smallest subspace containing the given points.
    pub fn span(&self, points: &[usize]) -> Option<(usize, usize)> {
        let rows: Vec<Vec<FieldElement>> = points.iter().map(|&p| self.point(p).to_vec()).collect();
        let basis = self.field.rref(&rows);
        if basis.is_empty() || basis.len() > self.d {
            return None;
        }
        let pts = self.span_points(&basis);
        let dim = basis.len() - 1;
        Some((dim, self.subspace_id(dim, &pts)?))
    }

    /// Offsets of each dimension in the element numbering of
    /// [`ProjectiveSpace::incidence_system`].
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.subspaces
            .iter()
            .map(|s| {
                let o = acc;
                acc += s.len();
                o
            })
            .collect()
    }

    pub fn element_count(&self) -> usize {
        self.subspaces.iter().map(Vec::len).sum()
    }

    /// Types `"0".."d-1"`, subspaces by dimension, incidence by
    /// containment.
    pub fn incidence_system(&self) -> IncidenceSystem {
        let mut b = SystemBuilder::new((0..self.d).map(|j| j.to_string()));
        for (j, subs) in self.subspaces.iter().enumerate() {
            b.add_elements(j, subs.len());
        }
        for (a, b2) in self.containments() {
            b.incident(a, b2);
        }
        b.build()
    }

    /// Containment pairs `(smaller, larger)` as global element ids.
    pub fn containments(&self) -> Vec<(usize, usize)> {
        let off = self.offsets();
        let mut pairs = Vec::new();
        for hi in 1..self.d {
            for (bi, big) in self.subspaces[hi].iter().enumerate() {
                for &p in &big.points {
                    pairs.push((off[0] + p, off[hi] + bi));
                }
                for lo in 1..hi {
                    for (si, small) in self.subspaces[lo].iter().enumerate() {
                        if is_subset(&small.points, &big.points) {
                            pairs.push((off[lo] + si, off[hi] + bi));
                        }
                    }
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    /// Extends a collineation given on points to every subspace, as a
    /// permutation of the elements of [`ProjectiveSpace::incidence_system`].
    pub fn collineation(&self, on_points: &Permutation) -> Option<Permutation> {
        let off = self.offsets();
        let mut images = vec![0usize; self.element_count()];
        for (j, subs) in self.subspaces.iter().enumerate() {
            for (i, s) in subs.iter().enumerate() {
                let mut pts: Vec<usize> = s.points.iter().map(|&p| on_points.apply(p)).collect();
                pts.sort_unstable();
                images[off[j] + i] = off[j] + self.subspace_id(j, &pts)?;
            }
        }
        Permutation::from_usize_images(&images).ok()
    }

    /// Point permutation `v ↦ v·M`.
    pub fn matrix_action(&self, m: &[Vec<FieldElement>]) -> Permutation {
        let f = &self.field;
        let n = self.d + 1;
        let images: Vec<usize> = (0..self.point_count())
            .map(|i| {
                let v = self.point(i);
                let w: Vec<FieldElement> = (0..n)
                    .map(|j| (0..n).fold(0, |acc, t| f.add(acc, f.mul(v[t], m[t][j]))))
                    .collect();
                self.point_id(&w).expect("invertible matrix")
            })
            .collect();
        Permutation::from_usize_images(&images).expect("invertible matrix")
    }

    /// Matrices generating GL(d+1,q): adjacent transvections by an
    /// additive basis `ξ^0..ξ^{k-1}` of the field, and `diag(ξ,1,..,1)`.
    pub fn gl_generators(&self) -> Vec<Vec<Vec<FieldElement>>> {
        let f = &self.field;
        let n = self.d + 1;
        let xi = f.primitive_element();
        let identity = || -> Vec<Vec<FieldElement>> {
            (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
        };
        let mut gens = Vec::new();
        for i in 0..n - 1 {
            for m in 0..f.degree() {
                let t = f.pow(xi, m as u64);
                let mut up = identity();
                up[i][i + 1] = t;
                gens.push(up);
                let mut down = identity();
                down[i + 1][i] = t;
                gens.push(down);
            }
        }
        if f.order() > 2 {
            let mut diag = identity();
            diag[0][0] = xi;
            gens.push(diag);
        }
        gens
    }

    /// PGL(d+1,q) acting on points.
    pub fn pgl_group(&self) -> PermGroup {
        let gens = self.gl_generators().iter().map(|m| self.matrix_action(m)).collect();
        PermGroup::new(self.point_count(), gens).expect("point permutations")
    }

    /// Coordinatewise `x ↦ x^p` on points; the flag is true when the map
    /// is the identity (prime fields).
    pub fn frobenius_point_map(&self) -> (Permutation, bool) {
        let f = &self.field;
        let images: Vec<usize> = (0..self.point_count())
            .map(|i| {
                let v: Vec<FieldElement> = self.point(i).iter().map(|&c| f.frobenius(c)).collect();
                self.point_id(&v).expect("nonzero")
            })
            .collect();
        let perm = Permutation::from_usize_images(&images).expect("bijective");
        let trivial = perm.is_identity();
        (perm, trivial)
    }

    /// Frobenius on all subspaces.
    pub fn frobenius_map(&self) -> (Permutation, bool) {
        let (on_points, trivial) = self.frobenius_point_map();
        (self.collineation(&on_points).expect("collineation"), trivial)
    }

    /// For a plane: point `[a:b:c]` ↦ line `ax+by+cz = 0` and back, as a
    /// permutation of points followed by lines.
    pub fn duality_map(&self) -> Result<Permutation, FieldError> {
        if self.d != 2 {
            return Err(FieldError::NotAPlane(self.d));
        }
        let f = &self.field;
        let np = self.point_count();
        let mut images = vec![0usize; np + self.subspaces[1].len()];
        for i in 0..np {
            let a = self.point(i);
            let mut on: Vec<usize> = (0..np)
                .filter(|&j| {
                    let x = self.point(j);
                    (0..3).fold(0, |acc, t| f.add(acc, f.mul(a[t], x[t]))) == 0
                })
                .collect();
            on.sort_unstable();
            let line = self.subspace_id(1, &on).expect("a linear form defines a line");
            images[i] = np + line;
            images[np + line] = i;
        }
        Ok(Permutation::from_usize_images(&images).expect("duality is bijective"))
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// `[1:w:0]`.
pub fn format_point(field: &FiniteField, v: &[FieldElement]) -> String {
    let mut s = String::from("[");
    for (i, &c) in v.iter().enumerate() {
        if i > 0 {
            s.push(':');
        }
        write!(s, "{}", field.display(c)).unwrap();
    }
    s.push(']');
    s
}
