//! Relation-only reducers: the rank-2 quadratic swap into the spanning
//! family, the area induction on paths, and the certifier combining them
//! with shuffle ranks.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::kfield::Coeff;
use crate::lattice::{
    area, det, enumerate_convex, epsilon, interior_count, is_convex, is_minimal_pair, local_convexifications, minimal_paths, slope_cmp,
    Path, Region, Segment, Window,
};
use crate::shuffle::{words_in_window, Label, ShuffleAlgebra, SymLaurent};

use super::{PresentationError, Result};

/// Recursion guard for the area induction.
const MAX_DEPTH: usize = 256;

/// Extra slope margin tried when decomposing a shifted segment.
const SHIFT_WIDEN: i64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "quadratic-swap")]
    QuadraticSwap,
    #[serde(rename = "case-i")]
    CaseI,
    #[serde(rename = "case-ii-a")]
    CaseIIa,
    #[serde(rename = "case-ii-b")]
    CaseIIb,
}

/// One rewrite `lhs = sum coeff * term`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    pub lhs: String,
    pub rhs: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_before: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_after: Option<i64>,
    /// Whether the step was checked against the shuffle model.
    pub verified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivationLog {
    pub steps: Vec<Step>,
}

impl DerivationLog {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every area-logging step strictly decreases the area.
    pub fn areas_decrease(&self) -> bool {
        self.steps.iter().all(|s| match (s.area_before, s.area_after) {
            (Some(a), Some(b)) => b < a,
            _ => true,
        })
    }

    pub fn to_json(&self) -> Vec<Value> {
        self.steps.iter().map(|s| serde_json::to_value(s).expect("steps serialize")).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub r: Option<i64>,
    pub d: Option<i64>,
    pub window: Option<[i64; 2]>,
}

impl Cell {
    pub fn new(r: i64, d: i64, window: Window) -> Self {
        Self { r: Some(r), d: Some(d), window: Some([window.lo, window.hi]) }
    }
}

/// One record of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cell: Cell,
    pub status: Status,
    pub steps: Vec<Value>,
    pub ranks: BTreeMap<String, i64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Linear combination of paths.
pub type PathSum<C> = BTreeMap<Path, C>;

fn ps_add<C: Coeff>(s: &mut PathSum<C>, p: Path, c: C) {
    if c.is_zero() {
        return;
    }
    match s.get_mut(&p) {
        Some(v) => {
            *v = v.add(&c);
            if v.is_zero() {
                s.remove(&p);
            }
        }
        None => {
            s.insert(p, c);
        }
    }
}

fn ps_extend<C: Coeff>(s: &mut PathSum<C>, o: &PathSum<C>, k: &C) {
    for (p, c) in o {
        ps_add(s, p.clone(), c.mul(k));
    }
}

fn ps_concat<C: Coeff>(a: &PathSum<C>, b: &PathSum<C>) -> PathSum<C> {
    let mut out = PathSum::new();
    for (p, c) in a {
        for (q, d) in b {
            ps_add(&mut out, p.concat(q), c.mul(d));
        }
    }
    out
}

fn word_path(w: &[i32]) -> Path {
    Path::new(w.iter().map(|&d| Segment::of(1, d as i64)).collect())
}

fn area_of(p: &Path) -> Result<i64> {
    Ok(area(p)?.to_integer())
}

fn stuck(p: impl std::fmt::Display, reason: &str) -> PresentationError {
    PresentationError::DerivationStuck { path: p.to_string(), reason: reason.to_string() }
}

/// The rank-2 spanning family: `u_{1,k} u_{1,l}` with `k <= l + 1` in odd
/// degree and `k <= l + 2` in even degree.
pub fn in_spanning_family(k: i32, l: i32) -> bool {
    let c = if (k + l).rem_euclid(2) == 1 { 1 } else { 2 };
    k <= l + c
}

/// Relation-only reducer over the shuffle model, which only serves to
/// compute local coefficients and to check every step.
pub struct Reducer<C: Coeff> {
    alg: Arc<ShuffleAlgebra<C>>,
    paranoid: bool,
    convex_cache: RwLock<HashMap<(Segment, Segment), Arc<Vec<(Path, C)>>>>,
    shift_cache: RwLock<HashMap<(i64, Segment), Arc<Vec<(Path, C)>>>>,
}

impl<C: Coeff> Reducer<C> {
    /// `paranoid` checks every step; otherwise only endpoints are checked.
    pub fn new(alg: Arc<ShuffleAlgebra<C>>, paranoid: bool) -> Self {
        Self { alg, paranoid, convex_cache: Default::default(), shift_cache: Default::default() }
    }

    pub fn algebra(&self) -> &Arc<ShuffleAlgebra<C>> {
        &self.alg
    }

    fn sum_image(&self, terms: &[(Path, C)]) -> Result<SymLaurent<C>> {
        let mut acc: Option<SymLaurent<C>> = None;
        for (q, c) in terms {
            let t = self.alg.path_image(q)?.scale(c);
            acc = Some(match acc {
                Some(a) => a.add(&t),
                None => t,
            });
        }
        Ok(acc.unwrap_or_else(|| SymLaurent::zero(0)))
    }

    fn check(&self, lhs: &SymLaurent<C>, terms: &[(Path, C)], at: &Path) -> Result<bool> {
        if !self.paranoid {
            return Ok(false);
        }
        if lhs.sub(&self.sum_image(terms)?).is_zero() {
            Ok(true)
        } else {
            Err(stuck(at, "rewrite step is not an identity in the shuffle model"))
        }
    }

    /// `u_x u_y` for a nonconvex pair as a combination of its local
    /// convexifications.
    pub fn convexify(&self, x: Segment, y: Segment) -> Result<Arc<Vec<(Path, C)>>> {
        if let Some(v) = self.convex_cache.read().get(&(x, y)) {
            return Ok(v.clone());
        }
        let cands = local_convexifications(x, y, None)?;
        let target = self.alg.mul(self.alg.u_image(x)?.as_ref(), self.alg.u_image(y)?.as_ref());
        let out = self
            .solve_paths(cands, &target)?
            .ok_or_else(|| stuck(Path::new(vec![x, y]), "product is outside the span of its convexifications"))?;
        let v = Arc::new(out);
        Ok(self.convex_cache.write().entry((x, y)).or_insert(v).clone())
    }

    /// Write `target` in the span of `cands`, or `None` if it is not there.
    fn solve_paths(&self, cands: Vec<Path>, target: &SymLaurent<C>) -> Result<Option<Vec<(Path, C)>>> {
        let images: Vec<SymLaurent<C>> = cands.iter().map(|q| self.alg.path_image(q)).collect::<std::result::Result<_, _>>()?;
        let cols: BTreeSet<&Label> = images.iter().flat_map(|f| f.terms().map(|(l, _)| l)).chain(target.terms().map(|(l, _)| l)).collect();
        let rows: Vec<Vec<C>> = images.iter().map(|f| cols.iter().map(|l| f.coeff(l)).collect()).collect();
        let rhs: Vec<C> = cols.iter().map(|l| target.coeff(l)).collect();
        let Some(sol) = C::solve_left(&rows, &rhs) else {
            return Ok(None);
        };
        let out: Vec<(Path, C)> = cands.into_iter().zip(sol).filter(|(_, c)| !c.is_zero()).collect();
        if !self.sum_image(&out)?.sub(target).is_zero() {
            return Ok(None);
        }
        Ok(Some(out))
    }

    /// `[u_{0,b}, u_x]` through convex paths of weight `x + (0,b)`. In the
    /// shuffle model `ad u_{0,b}` multiplies by the power sum `p_b`, a
    /// derivation, and the normalization cancels from every identity it is
    /// used in.
    fn shift(&self, b: i64, x: Segment) -> Result<Arc<Vec<(Path, C)>>> {
        if let Some(v) = self.shift_cache.read().get(&(b, x)) {
            return Ok(v.clone());
        }
        let w = Segment::new(x.p, x.q + b)?;
        let target = self.alg.u_image(x)?.mul_power_sum(b as i32);
        let entries = || target.terms().flat_map(|(l, _)| l.iter().copied());
        let (lo, hi) = (entries().min().unwrap_or(0) as i64, entries().max().unwrap_or(0) as i64);
        for extra in 0..=SHIFT_WIDEN {
            let win = Window::new(lo - x.p - extra, hi + x.p + extra)?;
            if let Some(out) = self.solve_paths(slope_window_family(w.p, w.q, win)?, &target)? {
                let v = Arc::new(out);
                return Ok(self.shift_cache.write().entry((b, x)).or_insert(v).clone());
            }
        }
        Err(stuck(Path::single(w), "shifted segment outside the convex family"))
    }

    /// `[u_{0,b}, u_w]` at the top rank. For `b = 1` and an empty triangle
    /// this is relation ii, `theta_{w+(0,1)} / alpha_1`; otherwise it comes
    /// from `theta_w = alpha_1 [u_a, u_{w-a}]` for a minimal pair and the
    /// Leibniz rule on lower ranks.
    fn shift_top(&self, b: i64, w: Segment) -> Result<PathSum<C>> {
        let alpha = self.alg.params().alpha(1);
        let up = Segment::of(0, 1);
        if b == 1 && interior_count(up, w)? == 0 {
            let inv = alpha.inv()?;
            return Ok(self.theta_paths(w.plus(up)?)?.into_iter().map(|(q, k)| (q, k.mul(&inv))).collect());
        }
        let (a, c) = minimal_paths(w)?[0];
        let (ua, uc) = (PathSum::from([(Path::single(a), C::one())]), PathSum::from([(Path::single(c), C::one())]));
        let (da, dc): (PathSum<C>, PathSum<C>) =
            (self.shift(b, a)?.iter().cloned().collect(), self.shift(b, c)?.iter().cloned().collect());
        let mut acc = PathSum::new();
        for (l, r, sign) in [(&da, &uc, 1), (&ua, &dc, 1), (&dc, &ua, -1), (&uc, &da, -1)] {
            ps_extend(&mut acc, &ps_concat(l, r), &alpha.mul_int(sign));
        }
        let straight = Path::single(w);
        let mut lead = None;
        for (q, k) in self.theta_paths(w)? {
            if q == straight {
                lead = Some(k);
            } else {
                ps_extend(&mut acc, &self.shift_path(b, &q, w.p + 1)?, &k.neg());
            }
        }
        let lead = lead.ok_or_else(|| stuck(&straight, "straight segment missing from theta"))?.inv()?;
        Ok(acc.into_iter().map(|(q, k)| (q, k.mul(&lead))).collect())
    }

    /// `[u_{0,b}, u_q]` by the Leibniz rule; segments of rank `top` or more
    /// go through `shift_top`.
    fn shift_path(&self, b: i64, q: &Path, top: i64) -> Result<PathSum<C>> {
        let s = q.segments();
        let mut acc = PathSum::new();
        for i in 0..s.len() {
            let d: PathSum<C> = if s[i].p >= top { self.shift_top(b, s[i])? } else { self.shift(b, s[i])?.iter().cloned().collect() };
            for (m, k) in d {
                let mut v = s[..i].to_vec();
                v.extend_from_slice(m.segments());
                v.extend_from_slice(&s[i + 1..]);
                ps_add(&mut acc, Path::new(v), k);
            }
        }
        Ok(acc)
    }

    /// `theta_z` as a combination of collinear, hence convex, paths.
    pub fn theta_paths(&self, z: Segment) -> Result<PathSum<C>> {
        let x0 = z.primitive();
        let n = z.deg();
        let mut e: Vec<PathSum<C>> = vec![PathSum::from([(Path::empty(), C::one())])];
        for j in 1..=n {
            let mut acc = PathSum::new();
            for k in 1..=j {
                let c = self.alg.params().alpha(k).mul_int(k);
                let seg = x0.scaled(k)?;
                for (p, v) in &e[(j - k) as usize] {
                    let mut s = vec![seg];
                    s.extend_from_slice(p.segments());
                    ps_add(&mut acc, Path::new(s), v.mul(&c));
                }
            }
            let inv = C::from_int(j).inv()?;
            e.push(acc.into_iter().map(|(p, v)| (p, v.mul(&inv))).collect());
        }
        Ok(e.pop().expect("series is nonempty"))
    }

    /// Express `u_{1,n} u_{1,m}` through the rank-2 spanning family by the
    /// quadratic relation alone.
    pub fn reduce_quadratic(&self, n: i32, m: i32, log: &mut DerivationLog) -> Result<BTreeMap<(i32, i32), C>> {
        let mut memo = HashMap::new();
        self.quad(n, m, log, &mut memo)
    }

    fn quad(
        &self,
        n: i32,
        m: i32,
        log: &mut DerivationLog,
        memo: &mut HashMap<(i32, i32), BTreeMap<(i32, i32), C>>,
    ) -> Result<BTreeMap<(i32, i32), C>> {
        if in_spanning_family(n, m) {
            return Ok(BTreeMap::from([((n, m), C::one())]));
        }
        if let Some(v) = memo.get(&(n, m)) {
            return Ok(v.clone());
        }
        let (e1, e2) = (self.alg.params().e1().clone(), self.alg.params().e2().clone());
        let one = C::one();
        let minus = C::from_int(-1);
        // the mode form of chi_1(z,w) T(z)T(w) = chi_{-1}(z,w) T(w)T(z),
        // collected as sum coeff * u_{1,i} u_{1,j} = 0
        let rel: [((i32, i32), C); 8] = [
            ((n - 3, m + 3), one.clone()),
            ((n - 2, m + 2), e1.neg()),
            ((n - 1, m + 1), e2.clone()),
            ((n, m), minus.clone()),
            ((m + 3, n - 3), minus),
            ((m + 2, n - 2), e2),
            ((m + 1, n - 1), e1.neg()),
            ((m, n), one),
        ];
        let mut collected: BTreeMap<(i32, i32), C> = BTreeMap::new();
        for (w, c) in rel {
            let e = collected.entry(w).or_insert_with(C::zero);
            *e = e.add(&c);
        }
        let lead = collected.remove(&(n, m)).unwrap_or_else(C::zero);
        if lead.is_zero() {
            return Err(stuck(word_path(&[n, m]), "quadratic relation does not involve the word"));
        }
        let f = lead.inv()?.neg();
        let rhs: Vec<((i32, i32), C)> = collected.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w, c.mul(&f))).collect();
        let verified = if self.paranoid {
            let mut acc = self.alg.word_image(&[n, m]).neg();
            for ((a, b), c) in &rhs {
                acc = acc.add(&self.alg.word_image(&[*a, *b]).scale(c));
            }
            if !acc.is_zero() {
                return Err(stuck(word_path(&[n, m]), "quadratic swap is not an identity in the shuffle model"));
            }
            true
        } else {
            false
        };
        log.steps.push(Step {
            rule: Rule::QuadraticSwap,
            lhs: format!("u(1,{n})*u(1,{m})"),
            rhs: rhs.iter().map(|((a, b), c)| (format!("u(1,{a})*u(1,{b})"), c.to_string())).collect(),
            area_before: None,
            area_after: None,
            verified,
        });
        let mut out: BTreeMap<(i32, i32), C> = BTreeMap::new();
        for ((a, b), c) in rhs {
            for (w, v) in self.quad(a, b, log, memo)? {
                let e = out.entry(w).or_insert_with(C::zero);
                *e = e.add(&v.mul(&c));
            }
        }
        out.retain(|_, c| !c.is_zero());
        memo.insert((n, m), out.clone());
        Ok(out)
    }

    /// Express `u_p` through convex paths by the area induction.
    pub fn case_reduce(&self, p: &Path, log: &mut DerivationLog) -> Result<PathSum<C>> {
        let mut memo = HashMap::new();
        let out = self.reduce(p, log, &mut memo, 0)?;
        let lhs = self.alg.path_image(p)?;
        let terms: Vec<(Path, C)> = out.iter().map(|(q, c)| (q.clone(), c.clone())).collect();
        if !lhs.sub(&self.sum_image(&terms)?).is_zero() {
            return Err(stuck(p, "reduction does not reproduce the path in the shuffle model"));
        }
        Ok(out)
    }

    fn reduce(
        &self,
        p: &Path,
        log: &mut DerivationLog,
        memo: &mut HashMap<Path, PathSum<C>>,
        depth: usize,
    ) -> Result<PathSum<C>> {
        if is_convex(p, Region::Gt)? {
            return Ok(PathSum::from([(p.clone(), C::one())]));
        }
        if let Some(v) = memo.get(p) {
            return Ok(v.clone());
        }
        if depth > MAX_DEPTH {
            return Err(stuck(p, "recursion guard exceeded"));
        }
        let terms = self.rewrite(p, log, memo, depth)?;
        let mut out = PathSum::new();
        for (q, c) in terms {
            for (r, v) in self.reduce(&q, log, memo, depth + 1)? {
                ps_add(&mut out, r, v.mul(&c));
            }
        }
        memo.insert(p.clone(), out.clone());
        Ok(out)
    }

    fn push(&self, log: &mut DerivationLog, rule: Rule, p: &Path, terms: &[(Path, C)], after: Option<i64>) -> Result<()> {
        let verified = self.check(&self.alg.path_image(p)?, terms, p)?;
        log.steps.push(Step {
            rule,
            lhs: p.to_string(),
            rhs: terms.iter().map(|(q, c)| (q.to_string(), c.to_string())).collect(),
            area_before: after.map(|_| area_of(p)).transpose()?,
            area_after: after,
            verified,
        });
        Ok(())
    }

    /// One rewrite of a nonconvex path.
    fn rewrite(
        &self,
        p: &Path,
        log: &mut DerivationLog,
        memo: &mut HashMap<Path, PathSum<C>>,
        depth: usize,
    ) -> Result<Vec<(Path, C)>> {
        let s = p.segments();
        if s.len() > 2 {
            let i = (0..s.len() - 1)
                .find(|&i| slope_cmp(s[i], s[i + 1]) == Ordering::Greater)
                .ok_or_else(|| stuck(p, "no nonconvex adjacent pair"))?;
            let terms: Vec<(Path, C)> = self.convexify(s[i], s[i + 1])?.iter().map(|(q, c)| (p.splice(i, q), c.clone())).collect();
            let mut after = 0;
            for (q, _) in &terms {
                after = after.max(area_of(q)?);
            }
            self.push(log, Rule::CaseI, p, &terms, Some(after))?;
            return Ok(terms);
        }
        let (x, y) = (s[0], s[1]);
        let z = x.plus(y)?;
        if is_minimal_pair(x, z) {
            // u_x u_y = u_y u_x + theta_z / alpha_1
            let inv = self.alg.params().alpha(1).inv()?;
            let mut terms = vec![(Path::new(vec![y, x]), C::one())];
            terms.extend(self.theta_paths(z)?.into_iter().map(|(q, c)| (q, c.mul(&inv))));
            self.push(log, Rule::CaseIIb, p, &terms, None)?;
            return Ok(terms);
        }
        if let Some(pt) = interior_point(x, z) {
            let terms = self.reroute(x, z, pt)?;
            let q = Path::new(vec![pt, z.minus(pt)?]);
            self.push(log, Rule::CaseIIa, p, &terms, Some(area_of(&q)?))?;
            return Ok(terms);
        }
        if det(z, x) > z.p {
            // lattice points on the vertical sides only: reroute through the
            // point (0,1) with the Leibniz rule for ad u_{0,1}
            let v = x.minus(Segment::of(0, 1))?;
            let q = Path::new(vec![v, y]);
            let terms = self.boundary_reroute(x, y, v, &q, log, memo, depth)?;
            self.push(log, Rule::CaseIIa, p, &terms, Some(area_of(&q)?))?;
            return Ok(terms);
        }
        if z.deg() > 1 {
            let pt = top_point(x, z).ok_or_else(|| stuck(p, "no minimal path on the top boundary"))?;
            let terms = self.reroute(x, z, pt)?;
            self.push(log, Rule::CaseIIb, p, &terms, None)?;
            return Ok(terms);
        }
        // z primitive: [u_b, u_a] = eps_{a,b} theta_z / alpha_1 with deg a = 1
        // and theta_z = alpha_1 u_z
        let sign = if x.deg() == 1 {
            -epsilon(x, y)?
        } else if y.deg() == 1 {
            epsilon(y, x)?
        } else {
            return Err(stuck(p, "neither leg is primitive"));
        };
        let terms = vec![(Path::new(vec![y, x]), C::one()), (Path::single(z), C::from_int(sign))];
        self.push(log, Rule::CaseIIb, p, &terms, None)?;
        Ok(terms)
    }

    /// With `x = v + (0,1)` and `D = ad u_{0,1}`:
    /// `beta u_x u_y = D(u_v u_y) - u_v D(u_y) - (D(u_v) - beta u_x) u_y`,
    /// where `u_v u_y` is reduced first since its area is smaller.
    #[allow(clippy::too_many_arguments)]
    fn boundary_reroute(
        &self,
        x: Segment,
        y: Segment,
        v: Segment,
        q: &Path,
        log: &mut DerivationLog,
        memo: &mut HashMap<Path, PathSum<C>>,
        depth: usize,
    ) -> Result<Vec<(Path, C)>> {
        let top = x.p + y.p;
        let mut acc = PathSum::new();
        for (c, k) in self.reduce(q, log, memo, depth + 1)? {
            ps_extend(&mut acc, &self.shift_path(1, &c, top)?, &k);
        }
        for (m, k) in self.shift(1, y)?.iter() {
            let mut s = vec![v];
            s.extend_from_slice(m.segments());
            ps_add(&mut acc, Path::new(s), k.neg());
        }
        let mut beta = None;
        for (m, k) in self.shift(1, v)?.iter() {
            if *m == Path::single(x) {
                beta = Some(k.clone());
            } else {
                let mut s = m.segments().to_vec();
                s.push(y);
                ps_add(&mut acc, Path::new(s), k.neg());
            }
        }
        let f = beta.ok_or_else(|| stuck(q, "straight segment missing from the shift"))?.inv()?;
        Ok(acc.into_iter().map(|(m, k)| (m, k.mul(&f))).collect())
    }

    /// Reroute `p = (x, z - x)` through the length-three path via `pt`:
    /// convexifying one pair of it yields `u_p`, the other yields
    /// `u_{(pt, z - pt)}`.
    fn reroute(&self, x: Segment, z: Segment, pt: Segment) -> Result<Vec<(Path, C)>> {
        let (n, ip, iq) = if pt.p < x.p {
            (vec![pt, x.minus(pt)?, z.minus(x)?], 0, 1)
        } else {
            (vec![x, pt.minus(x)?, z.minus(pt)?], 1, 0)
        };
        let np = Path::new(n.clone());
        let merged = |i: usize| n[i].plus(n[i + 1]);
        let whole_p = Path::single(merged(ip)?);
        let via_p = self.convexify(n[ip], n[ip + 1])?;
        let beta = via_p
            .iter()
            .find(|(q, _)| *q == whole_p)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| stuck(&np, "straight segment missing from the convexification"))?;
        let f = beta.inv()?;
        let mut out = PathSum::new();
        for (q, c) in self.convexify(n[iq], n[iq + 1])?.iter() {
            ps_add(&mut out, splice_raw(&n, iq, q), c.mul(&f));
        }
        for (q, c) in via_p.iter() {
            if *q != whole_p {
                ps_add(&mut out, splice_raw(&n, ip, q), c.mul(&f).neg());
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Reduce every windowed word of rank `r`, degree `d` into convex paths.
    fn span_words(&self, r: usize, d: i64, window: Window, log: &mut DerivationLog) -> Result<Vec<(Vec<i32>, PathSum<C>)>> {
        let mut out = Vec::new();
        let mut memo = HashMap::new();
        for w in words_in_window(r, d, window) {
            let sum = if r == 2 {
                let mut acc = PathSum::new();
                for ((k, l), c) in self.reduce_quadratic(w[0], w[1], log)? {
                    for (q, v) in self.reduce(&word_path(&[k, l]), log, &mut memo, 0)? {
                        ps_add(&mut acc, q, v.mul(&c));
                    }
                }
                acc
            } else {
                self.reduce(&word_path(&w), log, &mut memo, 0)?
            };
            let terms: Vec<(Path, C)> = sum.iter().map(|(q, c)| (q.clone(), c.clone())).collect();
            if !self.alg.word_image(&w).sub(&self.sum_image(&terms)?).is_zero() {
                return Err(stuck(word_path(&w), "reduction does not reproduce the word in the shuffle model"));
            }
            out.push((w, sum));
        }
        Ok(out)
    }

    /// Rank-2 spanning certificate: every windowed word of degree `d`
    /// rewritten into the spanning family by the quadratic relation.
    pub fn span_certify(&self, d: i64, window: Window) -> Result<(DerivationLog, Vec<(Vec<i32>, BTreeMap<(i32, i32), C>)>)> {
        let mut log = DerivationLog::default();
        let mut out = Vec::new();
        for w in words_in_window(2, d, window) {
            let r = self.reduce_quadratic(w[0], w[1], &mut log)?;
            out.push((w, r));
        }
        Ok((log, out))
    }
}

fn splice_raw(n: &[Segment], i: usize, q: &Path) -> Path {
    let mut v = n[..i].to_vec();
    v.extend_from_slice(q.segments());
    v.extend_from_slice(&n[i + 2..]);
    Path::new(v)
}

/// A lattice point strictly inside the left or right triangle of the
/// parallelogram spanned by `p = (x, z - x)`.
fn interior_point(x: Segment, z: Segment) -> Option<Segment> {
    use num_integer::Integer;
    let top = det(z, x);
    let y = Segment::of(z.p - x.p, z.q - x.q);
    // strictly below the top line: z.p * b < top + z.q * a
    let below = |a: i64| Integer::div_ceil(&(top + z.q * a), &z.p) - 1;
    for a in (1..z.p).filter(|&a| a != x.p) {
        // strictly above the chord of the central triangle
        let lo = if a < x.p {
            Integer::div_floor(&(x.q * a), &x.p) + 1
        } else {
            Integer::div_floor(&(x.q * y.p + y.q * (a - x.p)), &y.p) + 1
        };
        if lo <= below(a) {
            return Some(Segment::of(a, lo));
        }
    }
    None
}

/// A point `pt != x` on the top line through `x` with `(pt, z - pt)`
/// minimal.
fn top_point(x: Segment, z: Segment) -> Option<Segment> {
    let w = z.primitive();
    (-z.p..=z.p)
        .filter(|&k| k != 0)
        .filter_map(|k| {
            let pt = Segment::of(x.p + k * w.p, x.q + k * w.q);
            (0 < pt.p && pt.p < z.p && is_minimal_pair(pt, z)).then_some(pt)
        })
        .next()
}

/// Convex paths of weight `(r, d)` whose segments have slope in the window.
pub fn slope_window_family(r: i64, d: i64, window: Window) -> Result<Vec<Path>> {
    let wide = Window { lo: window.lo.min(window.lo * r), hi: window.hi.max(window.hi * r) };
    Ok(enumerate_convex(Segment::new(r, d)?, Region::Gt, wide)?
        .into_iter()
        .filter(|p| p.segments().iter().all(|s| window.lo * s.p <= s.q && s.q <= window.hi * s.p))
        .collect())
}

/// Certify one cell: windowed words reduce into the convex family by
/// relations alone, and the family is independent in the shuffle model.
pub fn isomorphism_certify<C: Coeff>(red: &Reducer<C>, r: i64, d: i64, window: Window) -> VerificationReport {
    let cell = Cell::new(r, d, window);
    let mut ranks = BTreeMap::new();
    let mut log = DerivationLog::default();
    let mut errors = Vec::new();
    let family = match slope_window_family(r, d, window) {
        Ok(f) => f,
        Err(e) => {
            return VerificationReport {
                suite: "isomorphism".into(),
                cell,
                status: Status::Fail,
                steps: vec![json!({"error": e.to_string()})],
                ranks,
            }
        }
    };
    let words = words_in_window(r as usize, d, window);
    let fam: BTreeSet<&Path> = family.iter().collect();
    let mut reached: BTreeSet<Path> = BTreeSet::new();
    let spanned = if r == 1 {
        reached.extend(words.iter().map(|w| word_path(w)));
        true
    } else {
        match red.span_words(r as usize, d, window, &mut log) {
            Ok(list) => {
                let mut ok = true;
                for (w, sum) in list {
                    for q in sum.keys() {
                        if !fam.contains(q) {
                            ok = false;
                            errors.push(json!({"error": format!("{} reduces onto {q} outside the family", word_path(&w))}));
                        }
                        reached.insert(q.clone());
                    }
                }
                ok
            }
            Err(e) => {
                errors.push(json!({"error": e.to_string()}));
                false
            }
        }
    };
    let images: std::result::Result<Vec<SymLaurent<C>>, _> = family.iter().map(|p| red.alg.path_image(p)).collect();
    let rank = match images {
        Ok(im) => red.alg.rank_of(&im) as i64,
        Err(e) => {
            errors.push(json!({"error": e.to_string()}));
            -1
        }
    };
    ranks.insert("words".into(), words.len() as i64);
    ranks.insert("family".into(), family.len() as i64);
    ranks.insert("reached".into(), reached.len() as i64);
    ranks.insert("rank".into(), rank);
    let ok = spanned && errors.is_empty() && rank == family.len() as i64 && log.areas_decrease();
    let mut steps = log.to_json();
    steps.extend(errors);
    VerificationReport { suite: "isomorphism".into(), cell, status: Status::from_bool(ok), steps, ranks }
}
