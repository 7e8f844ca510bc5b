//! Finite fields `F_{p^m}` with a compatible system of embeddings.
//!
//! Elements are packed as `sum c_i p^i` where `c_i` is the coefficient of
//! `a^i` and `a` is a root of the defining modulus. The modulus of degree
//! `m` is the least monic irreducible polynomial in that packed order.
//!
//! Every field also carries a distinguished primitive element `xi` chosen so
//! that for each subfield `F_{p^d}` the power `xi^((q-1)/(p^d-1))` is the
//! distinguished element of that subfield. Embeddings send `xi_d` to that
//! power, which makes them compose: the embedding `F_{p^a} -> F_{p^c}` equals
//! the composite through any intermediate field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, Integer, ToPrimitive};
use serde_json::Value;

use super::Field;
use crate::error::{Error, Result};

/// Largest field that is scanned element by element or given log tables.
pub const SCAN_LIMIT: u64 = 1 << 20;
/// Largest field that can be constructed at all.
const MAX_FIELD: u128 = 1 << 32;
const MAX_DIGITS: usize = 32;

#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    m: u32,
    q: u64,
    modulus: Vec<u64>,
    xi: u64,
    tables: OnceLock<Tables>,
    alpha_log: OnceLock<u64>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}^{})", self.0.p, self.0.m)
    }
}

fn cache() -> &'static Mutex<HashMap<(u64, u32), FiniteField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FiniteField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

// Dense polynomials over F_p, low degree first, used only while choosing
// moduli.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv_lead = super::powmod(b[db], p - 2, p);
        while r.len() > db {
            let k = r.len() - 1;
            let c = r[k] * inv_lead % p;
            for j in 0..=db {
                let idx = k - db + j;
                r[idx] = (r[idx] + p - c * b[j] % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or irreducibility test for a monic polynomial.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = f.len() - 1;
        let x = vec![0u64, 1];
        let mut h = x.clone();
        for _ in 0..m / 2 {
            h = powmod(&h, p, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(&diff, f, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

impl Inner {
    fn unpack(&self, mut x: u64, out: &mut [u64; MAX_DIGITS]) {
        for d in out.iter_mut().take(self.m as usize) {
            *d = x % self.p;
            x /= self.p;
        }
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        digits
            .iter()
            .take(self.m as usize)
            .rev()
            .fold(0u64, |acc, d| acc * self.p + d)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn neg(&self, a: u64) -> u64 {
        if self.p == 2 {
            return a;
        }
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    /// Multiplication by polynomial reduction; used before tables exist.
    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.m == 1 {
            return ((a as u128 * b as u128) % self.p as u128) as u64;
        }
        let m = self.m as usize;
        if self.p == 2 {
            let mut prod: u64 = 0;
            for i in 0..m {
                if (b >> i) & 1 == 1 {
                    prod ^= a << i;
                }
            }
            let modbits = self.pack_binary_modulus();
            for i in (m..2 * m - 1).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= modbits << (i - m);
                }
            }
            return prod;
        }
        let p = self.p;
        let mut da = [0u64; MAX_DIGITS];
        let mut db = [0u64; MAX_DIGITS];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..m {
                prod[i - m + j] = (prod[i - m + j] + p - c * self.modulus[j] % p) % p;
            }
            prod[i] = 0;
        }
        self.pack(&prod[..m])
    }

    fn pack_binary_modulus(&self) -> u64 {
        self.modulus
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, c)| acc | (c << i))
    }

    fn pow_slow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, x: u64, factors: &[u64]) -> bool {
        x != 0 && factors.iter().all(|r| self.pow_slow(x, (self.q - 1) / r) != 1)
    }
}

impl FiniteField {
    /// The field with `p^m` elements.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        let size = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
        if size > MAX_FIELD {
            return Err(Error::FieldTooLarge { size });
        }
        if let Some(f) = cache().lock().unwrap().get(&(p, m)) {
            return Ok(f.clone());
        }
        let field = Self::build(p, m)?;
        cache()
            .lock()
            .unwrap()
            .entry((p, m))
            .or_insert_with(|| field.clone());
        Ok(field)
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    fn build(p: u64, m: u32) -> Result<Self> {
        let q = p.pow(m);
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            for c in 0..p.pow(m) {
                if c % p == 0 {
                    continue;
                }
                let mut f: Vec<u64> = (0..m).map(|i| (c / p.pow(i)) % p).collect();
                f.push(1);
                if fp::is_irreducible(&f, p) {
                    found = Some(f);
                    break;
                }
            }
            found.expect("irreducible polynomials exist in every degree")
        };
        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            xi: 0,
            tables: OnceLock::new(),
            alpha_log: OnceLock::new(),
        };
        let factors = prime_factors(q - 1);
        inner.xi = if m == 1 {
            (1..p)
                .find(|&g| factors.iter().all(|r| powmod(g, (p - 1) / r, p) != 1))
                .unwrap_or(1)
        } else {
            let mut constraints = Vec::new();
            for r in prime_factors(m as u64) {
                let sub = FiniteField::new(p, m / r as u32)?;
                let exponent = (q - 1) / (sub.size() - 1);
                constraints.push((exponent, sub.xi_minimal_polynomial()));
            }
            (1..q)
                .find(|&x| {
                    inner.is_primitive(x, &factors)
                        && constraints.iter().all(|(e, mp)| {
                            let y = inner.pow_slow(x, *e);
                            let v = mp
                                .iter()
                                .rev()
                                .fold(0u64, |acc, c| inner.add(inner.mul_slow(acc, y), *c));
                            v == 0
                        })
                })
                .ok_or_else(|| {
                    Error::invalid(format!("no compatible primitive element in F({p}^{m})"))
                })?
        };
        Ok(FiniteField(Arc::new(inner)))
    }

    pub fn characteristic_prime(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn size(&self) -> u64 {
        self.0.q
    }

    /// Defining modulus, monic, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The distinguished primitive element.
    pub fn primitive_element(&self) -> u64 {
        self.0.xi
    }

    /// The class of the indeterminate `a` (a root of the modulus).
    pub fn generator(&self) -> u64 {
        if self.0.m == 1 {
            0
        } else {
            self.0.p
        }
    }

    /// All elements in canonical (packed) order.
    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.0.q
    }

    pub fn digits(&self, x: u64) -> Vec<u64> {
        let mut d = [0u64; MAX_DIGITS];
        self.0.unpack(x, &mut d);
        d[..self.0.m as usize].to_vec()
    }

    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        let reduced: Vec<u64> = digits.iter().map(|d| d % self.0.p).collect();
        if reduced.len() <= self.0.m as usize {
            return self.0.pack(&reduced);
        }
        // reduce a^k for k >= m through the modulus
        let a = self.generator();
        reduced
            .iter()
            .rev()
            .fold(0u64, |acc, c| self.add(&self.mul(&acc, &a), c))
    }

    fn tables(&self) -> &Tables {
        self.0.tables.get_or_init(|| {
            let q = self.0.q as usize;
            let mut exp = Vec::with_capacity(q - 1);
            let mut log = vec![0u32; q];
            let mut x = 1u64;
            for i in 0..q - 1 {
                exp.push(x as u32);
                log[x as usize] = i as u32;
                x = self.0.mul_slow(x, self.0.xi);
            }
            Tables { exp, log }
        })
    }

    fn uses_tables(&self) -> bool {
        self.0.m > 1 && self.0.q <= SCAN_LIMIT
    }

    /// Discrete logarithm to the base of the distinguished primitive element.
    pub fn log(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.0.q <= SCAN_LIMIT {
            if self.0.m == 1 {
                // small prime fields: walk the cycle
                let mut y = 1u64;
                for k in 0..self.0.q - 1 {
                    if y == x {
                        return Ok(k);
                    }
                    y = self.0.mul_slow(y, self.0.xi);
                }
                unreachable!("xi is primitive");
            }
            return Ok(self.tables().log[x as usize] as u64);
        }
        let order = self.0.q - 1;
        let n = (order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(n as usize);
        let mut y = 1u64;
        for j in 0..n {
            baby.entry(y).or_insert(j);
            y = self.0.mul_slow(y, self.0.xi);
        }
        let factor = self.0.pow_slow(self.0.xi, order - n % order);
        let mut gamma = x;
        for i in 0..=n {
            if let Some(j) = baby.get(&gamma) {
                return Ok((i * n + j) % order);
            }
            gamma = self.0.mul_slow(gamma, factor);
        }
        unreachable!("xi is primitive")
    }

    fn alpha_log(&self) -> u64 {
        *self
            .0
            .alpha_log
            .get_or_init(|| self.log(self.generator()).expect("generator is nonzero"))
    }

    /// Minimal polynomial of the distinguished primitive element over the
    /// prime field, as residues mod p (monic, low degree first).
    pub fn xi_minimal_polynomial(&self) -> Vec<u64> {
        let mut poly = vec![1u64];
        let mut conj = self.0.xi;
        for _ in 0..self.0.m {
            let root = self.0.neg(conj);
            let mut next = vec![0u64; poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] = self.0.add(next[i + 1], *c);
                next[i] = self.0.add(next[i], self.0.mul_slow(*c, root));
            }
            poly = next;
            conj = self.0.pow_slow(conj, self.0.p);
        }
        debug_assert!(poly.iter().all(|c| *c < self.0.p));
        poly
    }

    /// Extension of degree `m` over this field, with its embedding.
    pub fn extend(&self, m: u32) -> Result<(FiniteField, Embedding)> {
        let target = FiniteField::new(self.0.p, self.0.m * m)?;
        let emb = Embedding::new(self, &target)?;
        Ok((target, emb))
    }

    /// Smallest field containing both.
    pub fn compositum(&self, other: &FiniteField) -> Result<FiniteField> {
        if self.0.p != other.0.p {
            return Err(super::mismatch(self, other));
        }
        let m = self.0.m.lcm(&other.0.m);
        FiniteField::new(self.0.p, m)
    }

    pub fn embed_into(&self, target: &FiniteField, x: u64) -> Result<u64> {
        if self == target {
            return Ok(x);
        }
        Ok(Embedding::new(self, target)?.apply(x))
    }

    /// Degree over the prime field of the smallest subfield containing `x`.
    pub fn element_degree(&self, x: u64) -> u32 {
        let m = self.0.m;
        (1..=m)
            .filter(|d| m % d == 0)
            .find(|&d| self.pow(&x, self.0.p.pow(d)) == x)
            .unwrap_or(m)
    }

    /// Preimage of `x` under the embedding of `sub`, if `x` lies in it.
    pub fn restrict(&self, sub: &FiniteField, x: u64) -> Result<Option<u64>> {
        if sub == self {
            return Ok(Some(x));
        }
        if sub.0.p != self.0.p || self.0.m % sub.0.m != 0 {
            return Err(super::mismatch(sub, self));
        }
        if x == 0 {
            return Ok(Some(0));
        }
        let e = (self.0.q - 1) / (sub.0.q - 1);
        let l = self.log(x)?;
        if l % e != 0 {
            return Ok(None);
        }
        Ok(Some(sub.pow(&sub.0.xi, l / e)))
    }
}

/// Ring embedding `F_{p^a} -> F_{p^c}` for `a | c`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FiniteField,
    target: FiniteField,
    images: Vec<u64>,
}

impl Embedding {
    pub fn new(source: &FiniteField, target: &FiniteField) -> Result<Self> {
        if source.0.p != target.0.p || target.0.m % source.0.m != 0 {
            return Err(super::mismatch(source, target));
        }
        let images = if source.0.m == 1 {
            vec![1]
        } else if source == target {
            (0..source.0.m).map(|i| target.pow(&target.generator(), i as u64)).collect()
        } else {
            let e = (target.0.q - 1) / (source.0.q - 1);
            let l = (source.alpha_log() as u128 * e as u128 % (target.0.q - 1) as u128) as u64;
            let beta = target.pow(&target.0.xi, l);
            let mut imgs = Vec::with_capacity(source.0.m as usize);
            let mut acc = 1u64;
            for _ in 0..source.0.m {
                imgs.push(acc);
                acc = target.mul(&acc, &beta);
            }
            imgs
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn source(&self) -> &FiniteField {
        &self.source
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn apply(&self, x: u64) -> u64 {
        let digits = self.source.digits(x);
        digits
            .iter()
            .zip(&self.images)
            .fold(0u64, |acc, (d, img)| {
                if *d == 0 {
                    acc
                } else {
                    self.target.add(&acc, &self.target.mul(d, img))
                }
            })
    }
}

impl Field for FiniteField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.0.p)).to_u64().unwrap_or(0)
    }
    fn from_rational(&self, r: &BigRational) -> Result<u64> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        self.div(&num, &den)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.0.add(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.0.add(*a, self.0.neg(*b))
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        if self.uses_tables() {
            let t = self.tables();
            let s = t.log[*a as usize] as u64 + t.log[*b as usize] as u64;
            let ord = self.0.q - 1;
            t.exp[(if s >= ord { s - ord } else { s }) as usize] as u64
        } else {
            self.0.mul_slow(*a, *b)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        self.0.neg(*a)
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.uses_tables() {
            let t = self.tables();
            let ord = self.0.q - 1;
            let l = t.log[*a as usize] as u64;
            return Ok(t.exp[((ord - l) % ord) as usize] as u64);
        }
        Ok(self.pow(a, self.0.q - 2))
    }
    fn pow(&self, a: &u64, e: u64) -> u64 {
        if self.uses_tables() {
            if *a == 0 {
                return if e == 0 { 1 } else { 0 };
            }
            let t = self.tables();
            let ord = self.0.q - 1;
            let l = (t.log[*a as usize] as u128 * (e % ord) as u128 % ord as u128) as usize;
            return t.exp[l] as u64;
        }
        self.0.pow_slow(*a, e)
    }
    /// Lucas' theorem: `C(m, d)` is the product of digitwise binomials base p.
    fn binomial(&self, m: u64, d: u64) -> u64 {
        let p = self.0.p;
        let (mut m, mut d) = (m, d);
        let mut acc = 1u64;
        while m > 0 || d > 0 {
            let (mi, di) = (m % p, d % p);
            if di > mi {
                return 0;
            }
            let c = super::exact_binomial(mi, di);
            acc = self.mul(&acc, &self.from_bigint(&c));
            m /= p;
            d /= p;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn approx_eq(&self, a: &u64, b: &u64) -> bool {
        a == b
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn characteristic(&self) -> u64 {
        self.0.p
    }
    fn magnitude(&self, a: &u64) -> f64 {
        if *a == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn canonical_cmp(&self, a: &u64, b: &u64) -> Ordering {
        a.cmp(b)
    }
    fn describe(&self) -> String {
        if self.0.m == 1 {
            format!("F_{}", self.0.p)
        } else {
            format!("F_{}^{}", self.0.p, self.0.m)
        }
    }
    fn format_elem(&self, a: &u64) -> String {
        if self.0.m == 1 {
            return a.to_string();
        }
        let digits = self.digits(*a);
        let mut terms = Vec::new();
        for (i, d) in digits.iter().enumerate().rev() {
            if *d == 0 {
                continue;
            }
            let coeff = if *d == 1 && i > 0 { String::new() } else { d.to_string() };
            terms.push(match i {
                0 => coeff,
                1 => format!("{coeff}a"),
                _ => format!("{coeff}a^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
    fn elem_to_json(&self, a: &u64) -> Value {
        Value::String(self.format_elem(a))
    }
    fn elem_from_json(&self, v: &Value) -> Result<u64> {
        match v {
            Value::String(s) => {
                let coeffs = crate::parse::parse_terms(s, 'a')?;
                let mut acc = 0u64;
                for c in coeffs.iter().rev() {
                    acc = self.add(&self.mul(&acc, &self.generator()), &self.from_rational(c)?);
                }
                if self.0.m == 1 && coeffs.len() > 1 {
                    return Err(Error::invalid(format!("'{s}' is not an element of {}", self.describe())));
                }
                Ok(acc)
            }
            Value::Number(n) => n
                .as_i64()
                .map(|i| self.from_int(i))
                .ok_or_else(|| Error::invalid(format!("expected integer, got {n}"))),
            other => Err(Error::invalid(format!("expected field element, got {other}"))),
        }
    }
    fn descriptor(&self) -> Value {
        serde_json::json!({"kind": "Fq", "p": self.0.p, "m": self.0.m})
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_f5() {
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(f5.inv(&2).unwrap(), 3);
        assert_eq!(f5.inv(&0), Err(Error::DivisionByZero));
    }

    #[test]
    fn f4_modulus_and_product() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        // a * a = a + 1
        let a = f4.generator();
        assert_eq!(f4.mul(&a, &a), f4.add(&a, &1));
        assert_eq!(f4.format_elem(&f4.mul(&a, &a)), "a+1");
    }

    #[test]
    fn least_moduli() {
        assert_eq!(FiniteField::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn extend_f3_by_one_is_identity() {
        let f3 = FiniteField::prime(3).unwrap();
        let (t, emb) = f3.extend(1).unwrap();
        assert_eq!(t, f3);
        for x in 0..3 {
            assert_eq!(emb.apply(x), x);
        }
    }

    #[test]
    fn f4_into_f16_preserves_arithmetic() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let (f16, emb) = f4.extend(2).unwrap();
        assert_eq!(f16.size(), 16);
        for x in f4.elements() {
            for y in f4.elements() {
                assert_eq!(emb.apply(f4.add(&x, &y)), f16.add(&emb.apply(x), &emb.apply(y)));
                assert_eq!(emb.apply(f4.mul(&x, &y)), f16.mul(&emb.apply(x), &emb.apply(y)));
            }
        }
    }

    #[test]
    fn embeddings_compose() {
        for (p, a, b, c) in [(2u64, 1u32, 2u32, 4u32), (2, 2, 4, 8), (3, 1, 2, 4), (2, 2, 2, 6), (3, 1, 3, 3)] {
            let fa = FiniteField::new(p, a).unwrap();
            let fb = FiniteField::new(p, b).unwrap();
            let fc = FiniteField::new(p, c).unwrap();
            let ab = Embedding::new(&fa, &fb).unwrap();
            let bc = Embedding::new(&fb, &fc).unwrap();
            let ac = Embedding::new(&fa, &fc).unwrap();
            for x in fa.elements() {
                assert_eq!(bc.apply(ab.apply(x)), ac.apply(x), "p={p} {a}->{b}->{c} x={x}");
            }
        }
    }

    #[test]
    fn lucas_binomials() {
        let f3 = FiniteField::prime(3).unwrap();
        // C(4,1) = 4 = 1 mod 3; C(3,1) = 3 = 0 mod 3; C(8,3) = 56 = 2 mod 3
        assert_eq!(f3.binomial(4, 1), 1);
        assert_eq!(f3.binomial(3, 1), 0);
        assert_eq!(f3.binomial(8, 3), 2);
        assert_eq!(f3.binomial(2, 5), 0);
    }

    #[test]
    fn restrict_finds_subfield_elements() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let f16 = FiniteField::new(2, 4).unwrap();
        for x in f4.elements() {
            let y = f4.embed_into(&f16, x).unwrap();
            assert_eq!(f16.restrict(&f4, y).unwrap(), Some(x));
            assert_eq!(f16.element_degree(y), if x < 2 { 1 } else { 2 });
        }
        let outside = (0..16).filter(|y| f16.restrict(&f4, *y).unwrap().is_none()).count();
        assert_eq!(outside, 12);
    }

    #[test]
    fn parses_extension_elements() {
        let f9 = FiniteField::new(3, 2).unwrap();
        let x = f9.elem_from_json(&Value::String("2a+1".into())).unwrap();
        assert_eq!(f9.digits(x), vec![1, 2]);
        assert_eq!(f9.format_elem(&x), "2a+1");
        // a^2 = -1 in F_9 = F_3[a]/(a^2+1)
        let y = f9.elem_from_json(&Value::String("a^2".into())).unwrap();
        assert_eq!(y, 2);
    }

    #[test]
    fn large_field_without_tables() {
        let f = FiniteField::new(2, 21).unwrap();
        let a = f.generator();
        let b = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &b), 1);
        let l = f.log(a).unwrap();
        assert_eq!(f.pow(&f.primitive_element(), l), a);
    }
}
