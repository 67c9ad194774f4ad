//! The algebra presented by the currents `T_{+1}`, `T_{-1}`, `T_0^+`,
//! `T_0^-`: generator modes, the word-level straightening into
//! `E^> (x) E^0 (x) E^<` order, and the relation-only reducers.
//!
//! Elements are kept in triangular normal form. The positive part is a
//! symmetric Laurent polynomial of the shuffle model; the zero part is a
//! monomial in the commuting modes `u_{0,l}`; the negative part is stored
//! through the mirror anti-isomorphism `u_{-1,l} -> u_{1,l}` (products
//! reversed), so it is again a shuffle element.

mod reduce;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::kfield::{Coeff, KError};
use crate::lattice::{LatticeError, Path, Segment, Window};
use crate::par::par_map;
use crate::shuffle::{Label, ShuffleAlgebra, ShuffleError, SymLaurent};

pub use reduce::{
    in_spanning_family, isomorphism_certify, slope_window_family, Cell, DerivationLog, Reducer, Rule, Status, Step, VerificationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PresentationError {
    #[error("invalid generator mode {0}")]
    InvalidMode(GenMode),
    #[error("derivation stuck at {path}: {reason}")]
    DerivationStuck { path: String, reason: String },
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Field(#[from] KError),
}

type Result<T> = std::result::Result<T, PresentationError>;

/// A generator mode. `ThetaPlus(l)` is `theta_{0,l}` and `ThetaMinus(l)` is
/// `theta_{0,-l}`, both with `l >= 1`; `Uzero(l)` is `u_{0,l}`, `l != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GenMode {
    Upos(i64),
    Uneg(i64),
    ThetaPlus(i64),
    ThetaMinus(i64),
    Uzero(i64),
}

impl GenMode {
    pub fn weight(self) -> (i64, i64) {
        match self {
            GenMode::Upos(l) => (1, l),
            GenMode::Uneg(l) => (-1, l),
            GenMode::ThetaPlus(l) => (0, l),
            GenMode::ThetaMinus(l) => (0, -l),
            GenMode::Uzero(l) => (0, l),
        }
    }

    pub fn validate(self) -> Result<()> {
        let ok = match self {
            GenMode::Upos(_) | GenMode::Uneg(_) => true,
            GenMode::ThetaPlus(l) | GenMode::ThetaMinus(l) => l >= 1,
            GenMode::Uzero(l) => l != 0,
        };
        if ok {
            Ok(())
        } else {
            Err(PresentationError::InvalidMode(self))
        }
    }
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GenMode::Upos(l) => write!(f, "u(1,{l})"),
            GenMode::Uneg(l) => write!(f, "u(-1,{l})"),
            GenMode::ThetaPlus(l) => write!(f, "theta(0,{l})"),
            GenMode::ThetaMinus(l) => write!(f, "theta(0,{})", -l),
            GenMode::Uzero(l) => write!(f, "u(0,{l})"),
        }
    }
}

/// A coefficient times a product of generator modes.
#[derive(Clone, Debug, PartialEq)]
pub struct Word<C> {
    pub modes: Vec<GenMode>,
    pub coeff: C,
}

impl<C: Coeff> Word<C> {
    pub fn new(modes: Vec<GenMode>) -> Self {
        Self { modes, coeff: C::one() }
    }

    pub fn weight(&self) -> (i64, i64) {
        self.modes.iter().fold((0, 0), |(a, b), m| {
            let (p, q) = m.weight();
            (a + p, b + q)
        })
    }
}

/// Which half a zero mode is transported across.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    PosGen,
    NegGen,
}

/// Direction of the change of generators in the zero part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conversion {
    ThetaToU,
    UToTheta,
}

/// A polynomial in commuting zero modes: sorted mode multisets to
/// coefficients.
pub type ZeroPoly<C> = BTreeMap<Vec<i64>, C>;

fn zp_add<C: Coeff>(p: &mut ZeroPoly<C>, key: Vec<i64>, c: C) {
    if c.is_zero() {
        return;
    }
    match p.get_mut(&key) {
        Some(v) => {
            *v = v.add(&c);
            if v.is_zero() {
                p.remove(&key);
            }
        }
        None => {
            p.insert(key, c);
        }
    }
}

fn merge_modes(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v.sort_unstable();
    v
}

fn zp_mul<C: Coeff>(a: &ZeroPoly<C>, b: &ZeroPoly<C>) -> ZeroPoly<C> {
    let mut out = ZeroPoly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            zp_add(&mut out, merge_modes(ka, kb), ca.mul(cb));
        }
    }
    out
}

/// The commutator `[u_{0,l}, x]` for `x = u_{1,n}` or `u_{-1,n}`.
pub fn theta_transport<C: Coeff>(l: i64, side: Side, n: i64) -> Word<C> {
    assert!(l != 0, "transport needs a nonzero mode");
    match side {
        Side::PosGen => Word { modes: vec![GenMode::Upos(n + l)], coeff: C::from_int(l.signum()) },
        Side::NegGen => Word { modes: vec![GenMode::Uneg(n + l)], coeff: C::from_int(-l.signum()) },
    }
}

/// An ordered monomial `u_{1,pos_1}..u_{1,pos_k} * u_{0,zero..} * u_{-1,neg_1}..u_{-1,neg_m}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ordered {
    pub pos: Vec<i32>,
    pub zero: Vec<i64>,
    pub neg: Vec<i32>,
}

impl Ordered {
    pub(crate) fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.pos
            .iter()
            .map(|&b| Letter::P(b))
            .chain(self.zero.iter().map(|&l| Letter::Z(l)))
            .chain(self.neg.iter().map(|&a| Letter::N(a)))
    }

    pub fn weight(&self) -> (i64, i64) {
        let d: i64 = self.pos.iter().chain(&self.neg).map(|&v| v as i64).sum::<i64>() + self.zero.iter().sum::<i64>();
        (self.pos.len() as i64 - self.neg.len() as i64, d)
    }
}

pub type OrderedSum<C> = BTreeMap<Ordered, C>;

fn os_add<C: Coeff>(s: &mut OrderedSum<C>, key: Ordered, c: C) {
    if c.is_zero() {
        return;
    }
    match s.get_mut(&key) {
        Some(v) => {
            *v = v.add(&c);
            if v.is_zero() {
                s.remove(&key);
            }
        }
        None => {
            s.insert(key, c);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Letter {
    P(i32),
    Z(i64),
    N(i32),
}

/// Index of one triangular basis element: Schur label of the positive
/// part, zero-mode multiset, Schur label of the mirrored negative part.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriKey {
    pub pos: Label,
    pub zero: Vec<i64>,
    pub neg: Label,
}

impl TriKey {
    pub fn weight(&self) -> (i64, i64) {
        let d = self.pos.iter().chain(&self.neg).map(|&v| v as i64).sum::<i64>() + self.zero.iter().sum::<i64>();
        (self.pos.len() as i64 - self.neg.len() as i64, d)
    }
}

/// An element in triangular normal form. The optional witness is an
/// expression of the same element through ordered monomials; products use
/// it when present and otherwise recover one by decomposition.
#[derive(Clone, Debug)]
pub struct TriangularElement<C> {
    terms: BTreeMap<TriKey, C>,
    witness: Option<OrderedSum<C>>,
}

impl<C: Coeff> PartialEq for TriangularElement<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<C: Coeff> TriangularElement<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new(), witness: Some(OrderedSum::new()) }
    }

    pub fn one() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(TriKey::default(), c.clone());
        e.witness = Some([(Ordered::default(), c)].into_iter().filter(|(_, c)| !c.is_zero()).collect());
        e
    }

    /// A positive-half element.
    pub fn from_pos(f: &SymLaurent<C>) -> Self {
        let mut e = Self { terms: BTreeMap::new(), witness: None };
        for (l, c) in f.terms() {
            e.add_term(TriKey { pos: l.clone(), ..Default::default() }, c.clone());
        }
        e
    }

    /// A negative-half element given by its mirror image.
    pub fn from_neg_mirror(f: &SymLaurent<C>) -> Self {
        let mut e = Self { terms: BTreeMap::new(), witness: None };
        for (l, c) in f.terms() {
            e.add_term(TriKey { neg: l.clone(), ..Default::default() }, c.clone());
        }
        e
    }

    /// A zero-part element.
    pub fn from_zero(p: &ZeroPoly<C>) -> Self {
        let mut e = Self::zero();
        let mut w = OrderedSum::new();
        for (k, c) in p {
            e.add_term(TriKey { zero: k.clone(), ..Default::default() }, c.clone());
            os_add(&mut w, Ordered { zero: k.clone(), ..Default::default() }, c.clone());
        }
        e.witness = Some(w);
        e
    }

    fn add_term(&mut self, key: TriKey, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TriKey, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &TriKey) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn witness(&self) -> Option<&OrderedSum<C>> {
        self.witness.as_ref()
    }

    /// Drop the witness, keeping only the normal form.
    pub fn forget_witness(mut self) -> Self {
        self.witness = None;
        self
    }

    /// The bigradings occurring, in order.
    pub fn weights(&self) -> Vec<(i64, i64)> {
        let mut w: Vec<(i64, i64)> = self.terms.keys().map(TriKey::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        r.witness = match (&self.witness, &o.witness) {
            (Some(a), Some(b)) => {
                let mut w = a.clone();
                for (k, c) in b {
                    os_add(&mut w, k.clone(), c.clone());
                }
                Some(w)
            }
            _ => None,
        };
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&C::from_int(-1))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c.mul(k))).collect(),
            witness: self
                .witness
                .as_ref()
                .map(|w| w.iter().map(|(key, c)| (key.clone(), c.mul(k))).collect()),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| json!({"coeff": c.to_string(), "pos": k.pos, "zero": k.zero, "neg": k.neg}))
            .collect();
        json!({"basis": {"pos": "schur", "zero": "u0-monomial", "neg": "schur-mirror"}, "terms": terms})
    }
}

impl<C: Coeff> fmt::Display for TriangularElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let list = |v: &[i32]| v.iter().map(i32::to_string).collect::<Vec<_>>().join(",");
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if !k.pos.is_empty() {
                write!(f, "*P[{}]", list(&k.pos))?;
            }
            if !k.zero.is_empty() {
                let z: Vec<String> = k.zero.iter().map(i64::to_string).collect();
                write!(f, "*Z[{}]", z.join(","))?;
            }
            if !k.neg.is_empty() {
                write!(f, "*N[{}]", list(&k.neg))?;
            }
        }
        Ok(())
    }
}

/// How far a decomposition window may be widened beyond the requested one.
const WIDEN: i64 = 4;

/// The presented algebra over a coefficient field, sharing memo tables
/// with its shuffle model.
pub struct Presentation<C: Coeff> {
    alg: Arc<ShuffleAlgebra<C>>,
    /// `theta_{0,l}` in the `u_{0,k}` basis, indexed by `l`.
    theta: RwLock<Vec<Arc<ZeroPoly<C>>>>,
    straight: RwLock<HashMap<Vec<Letter>, Arc<OrderedSum<C>>>>,
}

impl<C: Coeff> Presentation<C> {
    pub fn new(alg: Arc<ShuffleAlgebra<C>>) -> Self {
        Self {
            alg,
            theta: RwLock::new(vec![Arc::new(ZeroPoly::from([(vec![], C::one())]))]),
            straight: Default::default(),
        }
    }

    pub fn algebra(&self) -> &Arc<ShuffleAlgebra<C>> {
        &self.alg
    }

    /// `theta_{0,k}` as a polynomial in zero modes (`theta_{0,0} = 1`).
    pub fn theta_poly(&self, k: i64) -> Result<ZeroPoly<C>> {
        let n = k.unsigned_abs() as usize;
        if let Some(p) = self.theta.read().get(n) {
            return Ok(flip(p, k < 0));
        }
        let mut tab = self.theta.write();
        while tab.len() <= n {
            // E_j = (1/j) sum_k k alpha_k u_{0,k} E_{j-k}
            let j = tab.len() as i64;
            let mut acc = ZeroPoly::new();
            for kk in 1..=j {
                let c = self.alg.params().alpha(kk).mul_int(kk);
                for (m, v) in tab[(j - kk) as usize].iter() {
                    zp_add(&mut acc, merge_modes(m, &[kk]), v.mul(&c));
                }
            }
            let inv = C::from_int(j).inv()?;
            let acc: ZeroPoly<C> = acc.into_iter().map(|(m, v)| (m, v.mul(&inv))).collect();
            tab.push(Arc::new(acc));
        }
        Ok(flip(&tab[n], k < 0))
    }

    /// The change-of-generators table up to degree `n`: entry `l - 1` is
    /// `theta_{0,l}` in zero modes (keys are `u` modes) or `u_{0,l}` in
    /// theta modes (keys are theta indices).
    pub fn theta_u_convert(&self, direction: Conversion, n: usize) -> Result<Vec<ZeroPoly<C>>> {
        match direction {
            Conversion::ThetaToU => (1..=n as i64).map(|l| self.theta_poly(l)).collect(),
            Conversion::UToTheta => {
                // alpha_l u_{0,l} = [s^l] log(1 + sum theta_k s^k)
                let mut logs: Vec<ZeroPoly<C>> = vec![ZeroPoly::new()];
                let mut out = Vec::with_capacity(n);
                for l in 1..=n as i64 {
                    let mut acc = ZeroPoly::from([(vec![l], C::one())]);
                    let inv = C::from_int(l).inv()?;
                    for k in 1..l {
                        for (m, v) in &logs[k as usize] {
                            zp_add(&mut acc, merge_modes(m, &[l - k]), v.mul_int(-k).mul(&inv));
                        }
                    }
                    let a = self.alg.params().alpha(l).inv()?;
                    out.push(acc.iter().map(|(m, v)| (m.clone(), v.mul(&a))).collect());
                    logs.push(acc);
                }
                Ok(out)
            }
        }
    }

    /// Substitute theta modes by their zero-mode expansions.
    pub fn theta_to_u(&self, p: &ZeroPoly<C>) -> Result<ZeroPoly<C>> {
        let mut out = ZeroPoly::new();
        for (m, c) in p {
            let mut acc = ZeroPoly::from([(vec![], c.clone())]);
            for &k in m {
                acc = zp_mul(&acc, &self.theta_poly(k)?);
            }
            for (k, v) in acc {
                zp_add(&mut out, k, v);
            }
        }
        Ok(out)
    }

    /// `[u_{-1,a}, u_{1,b}]` as a zero-part polynomial.
    pub fn cross_commutator(&self, a: i64, b: i64) -> Result<ZeroPoly<C>> {
        let k = a + b;
        if k == 0 {
            return Ok(ZeroPoly::new());
        }
        let inv = self.alg.params().alpha(1).inv()?;
        let c = if k > 0 { inv.neg() } else { inv };
        Ok(self.theta_poly(k)?.into_iter().map(|(m, v)| (m, v.mul(&c))).collect())
    }

    /// Expand a mode into letter words.
    pub(crate) fn mode_letters(&self, m: GenMode) -> Result<Vec<(Vec<Letter>, C)>> {
        m.validate()?;
        Ok(match m {
            GenMode::Upos(l) => vec![(vec![Letter::P(l as i32)], C::one())],
            GenMode::Uneg(l) => vec![(vec![Letter::N(l as i32)], C::one())],
            GenMode::Uzero(l) => vec![(vec![Letter::Z(l)], C::one())],
            GenMode::ThetaPlus(l) | GenMode::ThetaMinus(l) => {
                let k = if matches!(m, GenMode::ThetaPlus(_)) { l } else { -l };
                self.theta_poly(k)?
                    .into_iter()
                    .map(|(ms, c)| (ms.into_iter().map(Letter::Z).collect(), c))
                    .collect()
            }
        })
    }

    /// Straighten a letter word into ordered monomials.
    pub(crate) fn straighten(&self, w: &[Letter]) -> Result<Arc<OrderedSum<C>>> {
        if w.is_empty() {
            return Ok(Arc::new(OrderedSum::from([(Ordered::default(), C::one())])));
        }
        if let Some(v) = self.straight.read().get(w) {
            return Ok(v.clone());
        }
        let head = self.straighten(&w[..w.len() - 1])?;
        let mut out = OrderedSum::new();
        for (t, c) in head.iter() {
            self.append(t, c, w[w.len() - 1], &mut out)?;
        }
        let v = Arc::new(out);
        Ok(self.straight.write().entry(w.to_vec()).or_insert(v).clone())
    }

    /// `out += c * t * letter`, straightened.
    fn append(&self, t: &Ordered, c: &C, letter: Letter, out: &mut OrderedSum<C>) -> Result<()> {
        match letter {
            Letter::N(a) => {
                let mut t = t.clone();
                t.neg.push(a);
                os_add(out, t, c.clone());
            }
            Letter::Z(l) => {
                // u_{-1,n} u_{0,l} = u_{0,l} u_{-1,n} + sgn(l) u_{-1,n+l}
                for (zero, neg, k) in move_zero_left(&t.neg, &[l]) {
                    let key = Ordered { pos: t.pos.clone(), zero: merge_modes(&t.zero, &zero), neg };
                    os_add(out, key, c.mul_int(k));
                }
            }
            Letter::P(b) => {
                // the letter passes the negative part, leaving cross terms
                for j in 0..t.neg.len() {
                    let cc = self.cross_commutator(t.neg[j] as i64, b as i64)?;
                    for (zm, gamma) in &cc {
                        let g = c.mul(gamma);
                        for (zero, mut neg, k) in move_zero_left(&t.neg[..j], zm) {
                            neg.extend_from_slice(&t.neg[j + 1..]);
                            let key = Ordered { pos: t.pos.clone(), zero: merge_modes(&t.zero, &zero), neg };
                            os_add(out, key, g.mul_int(k));
                        }
                    }
                }
                // then the zero part: u_{0,l} u_{1,n} = u_{1,n} u_{0,l} + sgn(l) u_{1,n+l}
                for (shift, sign, rest) in zero_subsets(&t.zero) {
                    let mut pos = t.pos.clone();
                    pos.push(b + shift as i32);
                    os_add(out, Ordered { pos, zero: rest, neg: t.neg.clone() }, c.mul_int(sign));
                }
            }
        }
        Ok(())
    }

    /// Normal form of an ordered-monomial sum.
    pub fn canonicalize(&self, s: &OrderedSum<C>) -> TriangularElement<C> {
        let mut e = TriangularElement { terms: BTreeMap::new(), witness: Some(s.clone()) };
        for (t, c) in s {
            let pos = self.alg.word_image(&t.pos);
            let rev: Vec<i32> = t.neg.iter().rev().copied().collect();
            let neg = self.alg.word_image(&rev);
            for (lp, a) in pos.terms() {
                let ca = c.mul(a);
                for (ln, b) in neg.terms() {
                    e.add_term(TriKey { pos: lp.clone(), zero: t.zero.clone(), neg: ln.clone() }, ca.mul(b));
                }
            }
        }
        e
    }

    /// Straighten a word into triangular normal form.
    pub fn normalize(&self, w: &Word<C>) -> Result<TriangularElement<C>> {
        let mut expanded: Vec<(Vec<Letter>, C)> = vec![(vec![], w.coeff.clone())];
        for &m in &w.modes {
            let opts = self.mode_letters(m)?;
            let mut next = Vec::with_capacity(expanded.len() * opts.len());
            for (pre, c) in &expanded {
                for (ls, k) in &opts {
                    let mut v = pre.clone();
                    v.extend_from_slice(ls);
                    next.push((v, c.mul(k)));
                }
            }
            expanded = next;
        }
        let mut sum = OrderedSum::new();
        for (ls, c) in expanded {
            for (t, v) in self.straighten(&ls)?.iter() {
                os_add(&mut sum, t.clone(), v.mul(&c));
            }
        }
        Ok(self.canonicalize(&sum))
    }

    /// Straighten an ordered-monomial sum letter by letter.
    pub fn normalize_ordered(&self, s: &OrderedSum<C>) -> Result<TriangularElement<C>> {
        let mut sum = OrderedSum::new();
        for (t, c) in s {
            let ls: Vec<Letter> = t.letters().collect();
            for (k, v) in self.straighten(&ls)?.iter() {
                os_add(&mut sum, k.clone(), v.mul(c));
            }
        }
        Ok(self.canonicalize(&sum))
    }

    /// Words expressing `f`, with the window widened as needed.
    fn words_of(&self, f: &SymLaurent<C>, window: Window) -> Result<Vec<(Vec<i32>, C)>> {
        let (lo, hi) = f.entry_range().unwrap_or((0, 0));
        let base = Window { lo: window.lo.min(lo as i64), hi: window.hi.max(hi as i64) };
        let mut last = None;
        for extra in 0..=WIDEN {
            let w = Window { lo: base.lo - extra, hi: base.hi + extra };
            match self.alg.decompose_to_words(f, w) {
                Ok(words) => return Ok(words),
                Err(e @ ShuffleError::WindowExhausted { .. }) => last = Some(e),
                Err(e) => return Err(e.into()),
            }
        }
        Err(last.expect("at least one attempt").into())
    }

    /// Re-express the normal form through ordered monomials by decomposing
    /// the outer parts into words. A single Schur function need not lie in
    /// the span of words, so the positive parts are first collected per
    /// (zero, negative) key and the negative parts per (word, zero) key.
    pub fn expand(&self, x: &TriangularElement<C>, window: Window) -> Result<OrderedSum<C>> {
        let mut pos_parts: BTreeMap<(Vec<i64>, Label), SymLaurent<C>> = BTreeMap::new();
        for (k, c) in &x.terms {
            pos_parts
                .entry((k.zero.clone(), k.neg.clone()))
                .or_insert_with(|| SymLaurent::zero(k.pos.len()))
                .add_term(k.pos.clone(), c.clone());
        }
        let mut neg_parts: BTreeMap<(Vec<i32>, Vec<i64>), SymLaurent<C>> = BTreeMap::new();
        for ((zero, neg), f) in pos_parts {
            for (w, a) in self.words_of(&f, window)? {
                neg_parts
                    .entry((w, zero.clone()))
                    .or_insert_with(|| SymLaurent::zero(neg.len()))
                    .add_term(neg.clone(), a);
            }
        }
        let mut out = OrderedSum::new();
        for ((pos, zero), g) in neg_parts {
            for (n, b) in self.words_of(&g, window)? {
                let neg: Vec<i32> = n.into_iter().rev().collect();
                os_add(&mut out, Ordered { pos: pos.clone(), zero: zero.clone(), neg }, b);
            }
        }
        Ok(out)
    }

    fn witness_of(&self, x: &TriangularElement<C>, window: Window) -> Result<OrderedSum<C>> {
        match &x.witness {
            Some(w) => Ok(w.clone()),
            None => self.expand(x, window),
        }
    }

    /// The product in the presented algebra. Elements without a witness
    /// are first decomposed into words, starting from `window`.
    pub fn multiply(&self, x: &TriangularElement<C>, y: &TriangularElement<C>, window: Window) -> Result<TriangularElement<C>> {
        let wx = self.witness_of(x, window)?;
        let wy = self.witness_of(y, window)?;
        let pairs: Vec<(&Ordered, &C)> = wx.iter().collect();
        let parts = par_map(pairs, |(t1, c1)| -> Result<OrderedSum<C>> {
            let mut acc = OrderedSum::new();
            for (t2, c2) in &wy {
                let ls: Vec<Letter> = t1.letters().chain(t2.letters()).collect();
                let c = c1.mul(c2);
                for (k, v) in self.straighten(&ls)?.iter() {
                    os_add(&mut acc, k.clone(), v.mul(&c));
                }
            }
            Ok(acc)
        });
        let mut sum = OrderedSum::new();
        for p in parts {
            for (k, v) in p? {
                os_add(&mut sum, k, v);
            }
        }
        Ok(self.canonicalize(&sum))
    }

    pub fn commutator(&self, x: &TriangularElement<C>, y: &TriangularElement<C>, window: Window) -> Result<TriangularElement<C>> {
        Ok(self.multiply(x, y, window)?.sub(&self.multiply(y, x, window)?))
    }

    pub fn generator(&self, m: GenMode) -> Result<TriangularElement<C>> {
        self.normalize(&Word::new(vec![m]))
    }

    /// `u_{(r,d)}`; ranks other than 0 and 1 come from the shuffle model,
    /// negative ranks through the mirror.
    pub fn u_element(&self, r: i64, d: i64) -> Result<TriangularElement<C>> {
        match r {
            1 => self.generator(GenMode::Upos(d)),
            -1 => self.generator(GenMode::Uneg(d)),
            0 => self.generator(GenMode::Uzero(d)),
            r if r > 0 => Ok(TriangularElement::from_pos(self.alg.u_image(Segment::new(r, d)?)?.as_ref())),
            r => Ok(TriangularElement::from_neg_mirror(self.alg.u_image(Segment::new(-r, d)?)?.as_ref())),
        }
    }

    /// `theta_{(r,d)}`, with `theta_{(0,0)} = 1`.
    pub fn theta_element(&self, r: i64, d: i64) -> Result<TriangularElement<C>> {
        match r {
            0 => Ok(TriangularElement::from_zero(&self.theta_poly(d)?)),
            r if r > 0 => Ok(TriangularElement::from_pos(&self.alg.theta_image(Segment::new(r, d)?)?)),
            r => Ok(TriangularElement::from_neg_mirror(&self.alg.theta_image(Segment::new(-r, d)?)?)),
        }
    }

    /// `u_p` for a path in the positive half, as a normal form.
    pub fn path_element(&self, p: &Path) -> Result<TriangularElement<C>> {
        Ok(TriangularElement::from_pos(&self.alg.path_image(p)?))
    }
}

fn flip<C: Coeff>(p: &ZeroPoly<C>, negate: bool) -> ZeroPoly<C> {
    if !negate {
        return p.clone();
    }
    p.iter()
        .map(|(m, c)| {
            let mut k: Vec<i64> = m.iter().map(|v| -v).collect();
            k.sort_unstable();
            (k, c.clone())
        })
        .collect()
}

/// `Z * u_{1,b}` as `sum_S prod_{l in S} sgn(l) u_{1,b + sum S} Z \ S`:
/// (shift, sign, remaining modes) for every sub-multiset by position.
fn zero_subsets(z: &[i64]) -> Vec<(i64, i64, Vec<i64>)> {
    let n = z.len();
    (0..1usize << n)
        .map(|mask| {
            let (mut shift, mut sign, mut rest) = (0, 1, Vec::new());
            for (i, &l) in z.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    shift += l;
                    sign *= l.signum();
                } else {
                    rest.push(l);
                }
            }
            (shift, sign, rest)
        })
        .collect()
}

/// `M * u_{0,l_1} ... u_{0,l_t}` for a negative word `M`, as
/// (zero modes moved left, remaining negative word, integer coefficient).
fn move_zero_left(m: &[i32], zm: &[i64]) -> Vec<(Vec<i64>, Vec<i32>, i64)> {
    let mut cur: Vec<(Vec<i64>, Vec<i32>, i64)> = vec![(vec![], m.to_vec(), 1)];
    for &l in zm {
        let mut next = Vec::with_capacity(cur.len() * (m.len() + 1));
        for (z, w, k) in cur {
            for i in 0..w.len() {
                let mut w2 = w.clone();
                w2[i] += l as i32;
                next.push((z.clone(), w2, k * l.signum()));
            }
            let mut z2 = z;
            z2.push(l);
            next.push((z2, w, k));
        }
        cur = next;
    }
    cur
}
