//! Dirichlet characters modulo `q`.
//!
//! The unit group `(Z/qZ)*` is split by the Chinese remainder theorem into
//! cyclic factors with fixed generators: the smallest primitive root for each
//! odd prime power, `-1` for `4`, and the pair `{-1, 5}` for `2^k` with
//! `k >= 3`. A character is the vector of exponents it assigns to those
//! generators, and characters are enumerated lexicographically in that
//! vector. Values are kept as exponents of a root of unity of the
//! character's order and only turned into complex numbers at the boundary.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numtheory::{factorize, gcd, primitive_root_prime_power};

/// Largest modulus accepted by [`enumerate_characters`].
pub const MAX_MODULUS: u64 = 10_000;

const NON_COPRIME: u16 = u16::MAX;

/// One cyclic factor of the unit group.
#[derive(Clone, Debug)]
struct CyclicFactor {
    prime: u64,
    /// Prime power `p^k` this factor lives in.
    modulus: u64,
    generator: u64,
    order: u64,
    /// Discrete log of every residue `b mod p^k` to `generator`; `None` off units.
    dlog: Vec<Option<u32>>,
}

/// Generator data for the unit group mod `q`, shared by all its characters.
#[derive(Debug)]
pub struct UnitGroup {
    modulus: u64,
    factors: Vec<CyclicFactor>,
    /// Per factor: exponent-of-generator of every residue mod `q`.
    logs: Vec<Vec<u32>>,
    coprime: Vec<bool>,
}

impl UnitGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("modulus must be >= 1"));
        }
        if q > MAX_MODULUS {
            return Err(Error::domain(format!("modulus {q} exceeds {MAX_MODULUS}")));
        }
        let mut factors = Vec::new();
        for (p, k) in factorize(q) {
            let pk = p.pow(k);
            if p == 2 {
                match k {
                    1 => {}
                    2 => factors.push(cyclic_factor(2, pk, pk - 1, 2)),
                    _ => {
                        factors.push(two_power_sign_factor(pk));
                        factors.push(two_power_five_factor(pk));
                    }
                }
            } else {
                let g = primitive_root_prime_power(p, k);
                factors.push(cyclic_factor(p, pk, g, pk / p * (p - 1)));
            }
        }
        let coprime: Vec<bool> = (0..q).map(|a| gcd(a, q) == 1).collect();
        let logs = factors
            .iter()
            .map(|f| {
                (0..q)
                    .map(|a| {
                        if coprime[a as usize] {
                            f.dlog[(a % f.modulus) as usize].expect("unit has a discrete log")
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(UnitGroup {
            modulus: q,
            factors,
            logs,
            coprime,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the cyclic factors, in generator order.
    pub fn factor_orders(&self) -> Vec<u64> {
        self.factors.iter().map(|f| f.order).collect()
    }

    /// Generators lifted to residues mod `q` (identity on the other factors).
    pub fn generators(&self) -> Vec<u64> {
        self.factors
            .iter()
            .map(|f| {
                let others = self.modulus / f.modulus;
                crt_pair(f.generator, f.modulus, 1, others)
            })
            .collect()
    }

    /// Number of characters, `phi(q)`.
    pub fn size(&self) -> usize {
        self.factors.iter().map(|f| f.order as usize).product()
    }

    /// Builds the character with the given exponent vector.
    pub fn character(self: &Arc<Self>, label: &[u64]) -> Result<DirichletCharacter> {
        if label.len() != self.factors.len() {
            return Err(Error::domain("label length does not match generator count"));
        }
        for (c, f) in label.iter().zip(&self.factors) {
            if *c >= f.order {
                return Err(Error::domain("label entry exceeds factor order"));
            }
        }
        let exponent: u64 = self.factors.iter().fold(1, |acc, f| lcm(acc, f.order));
        // Actual order of the character.
        let order = label
            .iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&c, f)| lcm(acc, f.order / gcd(c, f.order)));
        let q = self.modulus;
        let mut exps = vec![NON_COPRIME; q as usize];
        for a in 0..q as usize {
            if !self.coprime[a] {
                continue;
            }
            let mut e = 0u64;
            for (i, f) in self.factors.iter().enumerate() {
                let scale = exponent / f.order;
                e = (e + label[i] * self.logs[i][a] as u64 % f.order * scale) % exponent;
            }
            // e / exponent == e' / order
            debug_assert_eq!((e * order) % exponent, 0);
            exps[a] = ((e * order) / exponent) as u16;
        }
        let index = label
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&c, f)| acc * f.order as usize + c as usize);
        let conductor = label
            .iter()
            .zip(&self.factors)
            .fold(1u64, |acc, (&c, f)| acc * factor_conductor(f, c));
        let conductor = dedupe_two_conductor(conductor, label, &self.factors);
        let parity = if q <= 2 {
            0
        } else {
            u8::from(exps[(q - 1) as usize] != 0)
        };
        Ok(DirichletCharacter {
            group: Arc::clone(self),
            index,
            label: label.to_vec(),
            order,
            exps,
            parity,
            conductor,
        })
    }
}

fn cyclic_factor(p: u64, pk: u64, g: u64, order: u64) -> CyclicFactor {
    let mut dlog = vec![None; pk as usize];
    let mut x = 1u64;
    for e in 0..order {
        dlog[x as usize] = Some(e as u32);
        x = x * g % pk;
    }
    CyclicFactor {
        prime: p,
        modulus: pk,
        generator: g,
        order,
        dlog,
    }
}

/// The `{±1}` factor of `(Z/2^kZ)*`, `k >= 3`.
fn two_power_sign_factor(pk: u64) -> CyclicFactor {
    let mut dlog = vec![None; pk as usize];
    for b in (1..pk).step_by(2) {
        dlog[b as usize] = Some(u32::from(b % 4 == 3));
    }
    CyclicFactor {
        prime: 2,
        modulus: pk,
        generator: pk - 1,
        order: 2,
        dlog,
    }
}

/// The `<5>` factor of `(Z/2^kZ)*`, `k >= 3`: logs of `±b` coincide.
fn two_power_five_factor(pk: u64) -> CyclicFactor {
    let order = pk / 4;
    let mut dlog = vec![None; pk as usize];
    let mut x = 1u64;
    for e in 0..order {
        dlog[x as usize] = Some(e as u32);
        dlog[(pk - x) as usize] = Some(e as u32);
        x = x * 5 % pk;
    }
    CyclicFactor {
        prime: 2,
        modulus: pk,
        generator: 5,
        order,
        dlog,
    }
}

/// Conductor contribution of an odd prime-power factor; the 2-adic factors
/// are handled together by [`dedupe_two_conductor`].
fn factor_conductor(f: &CyclicFactor, c: u64) -> u64 {
    if f.prime == 2 || c == 0 {
        return 1;
    }
    // Trivial on the kernel of reduction to p^j iff p^(k-j) | c.
    let mut pj = f.prime;
    while pj < f.modulus && c % (f.modulus / pj) != 0 {
        pj *= f.prime;
    }
    pj
}

fn dedupe_two_conductor(odd_part: u64, label: &[u64], factors: &[CyclicFactor]) -> u64 {
    let mut sign = 0;
    let mut five: Option<(u64, u64)> = None;
    for (c, f) in label.iter().zip(factors) {
        if f.prime != 2 {
            continue;
        }
        if f.generator == 5 && f.order == f.modulus / 4 && f.modulus >= 8 {
            five = Some((*c, f.order));
        } else {
            sign = *c;
        }
    }
    let two_part = match five {
        Some((c5, ord)) if c5 != 0 => {
            let char_order = ord / gcd(c5, ord);
            4 * char_order
        }
        _ if sign != 0 => 4,
        _ => 1,
    };
    odd_part * two_part
}

fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    // x ≡ a (m), x ≡ b (n), gcd(m, n) = 1
    if n == 1 {
        return a % m;
    }
    let mn = m * n;
    (0..n)
        .map(|t| a + t * m)
        .find(|x| x % n == b % n)
        .map(|x| x % mn)
        .expect("coprime moduli")
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// A Dirichlet character, stored as root-of-unity exponents.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    index: usize,
    label: Vec<u64>,
    order: u64,
    exps: Vec<u16>,
    parity: u8,
    conductor: u64,
}

impl std::fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.modulus())
            .field("index", &self.index)
            .field("label", &self.label)
            .field("order", &self.order)
            .field("parity", &self.parity)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.label == other.label
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// Position in the enumeration order of [`enumerate_characters`].
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn label(&self) -> &[u64] {
        &self.label
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `0` for even characters, `1` for odd ones.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    /// Exponent `e` with `chi(n) = exp(2 pi i e / order)`, or `None` when
    /// `gcd(n, q) > 1`.
    #[inline]
    pub fn exponent(&self, n: u64) -> Option<u64> {
        let e = self.exps[(n % self.group.modulus) as usize];
        (e != NON_COPRIME).then_some(e as u64)
    }

    /// Value of a real character as an exact integer in `{-1, 0, 1}`.
    #[inline]
    pub fn real_value(&self, n: u64) -> Option<i64> {
        if !self.is_real() {
            return None;
        }
        Some(match self.exponent(n) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        })
    }

    pub fn evaluate(&self, n: u64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => root_of_unity(e, self.order),
        }
    }

    /// The complex-conjugate character.
    pub fn conj(&self) -> DirichletCharacter {
        let label: Vec<u64> = self
            .label
            .iter()
            .zip(&self.group.factors)
            .map(|(&c, f)| (f.order - c) % f.order)
            .collect();
        self.group
            .character(&label)
            .expect("conjugate label is in range")
    }

    /// Gauss sum `sum_{a=1}^{q} chi(a) e^{2 pi i a / q}`.
    pub fn gauss_sum(&self) -> Result<Complex64> {
        if !self.is_primitive() {
            return Err(Error::domain(format!(
                "Gauss sum requested for imprimitive character ({}, {})",
                self.modulus(),
                self.index
            )));
        }
        let q = self.modulus();
        let mut sum = crate::numeric::ComplexSum::default();
        for a in 1..=q {
            if let Some(e) = self.exponent(a) {
                sum.add(root_of_unity(e, self.order) * root_of_unity(a % q, q));
            }
        }
        Ok(sum.value())
    }

    /// Root number `tau(chi) / (i^parity sqrt(q))`.
    pub fn root_number(&self) -> Result<Complex64> {
        let tau = self.gauss_sum()?;
        let i_pow = if self.parity == 1 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(tau / (i_pow * (self.modulus() as f64).sqrt()))
    }
}

/// `exp(2 pi i k / n)`, exact at multiples of a quarter turn.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if 4 * k % n == 0 {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// All `phi(q)` characters mod `q` in lexicographic label order; index 0 is
/// principal.
pub fn enumerate_characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(UnitGroup::new(q)?);
    let orders = group.factor_orders();
    let mut out = Vec::with_capacity(group.size());
    let mut label = vec![0u64; orders.len()];
    loop {
        out.push(group.character(&label)?);
        // odometer, last position fastest
        let mut i = orders.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            label[i] += 1;
            if label[i] < orders[i] {
                break;
            }
            label[i] = 0;
        }
    }
}

/// Character `(q, index)` in the enumeration order.
pub fn character(q: u64, index: usize) -> Result<DirichletCharacter> {
    let group = Arc::new(UnitGroup::new(q)?);
    let orders = group.factor_orders();
    if index >= group.size() {
        return Err(Error::domain(format!(
            "character index {index} out of range for modulus {q} ({} characters)",
            group.size()
        )));
    }
    let mut label = vec![0u64; orders.len()];
    let mut rest = index as u64;
    for i in (0..orders.len()).rev() {
        label[i] = rest % orders[i];
        rest /= orders[i];
    }
    group.character(&label)
}
