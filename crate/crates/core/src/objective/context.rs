use std::collections::BTreeSet;

use super::{kkt_violation, MembershipVector};
use crate::error::{Error, Result};
use crate::graph::{LocalNeighborhood, NodeSet};
use crate::scalar::Scalar;

/// Mutable σ-conductance workspace over one neighborhood.
///
/// Coordinates are local indices of the neighborhood; nodes outside it are
/// fixed at zero. The caches `a_cc`, `a_cV` and `Σ c_i² d_i` are updated in
/// `O(deg)` per coordinate change.
#[derive(Debug, Clone)]
pub struct ObjectiveContext<'n, T> {
    view: &'n LocalNeighborhood,
    sigma: T,
    values: Vec<T>,
    seed: Vec<bool>,
    support: BTreeSet<usize>,
    a_cc: T,
    a_cv: T,
    squares: T,
}

impl<'n, T: Scalar> ObjectiveContext<'n, T> {
    /// Starts from `initial`, whose support and seeds must lie in `view`.
    pub fn new(view: &'n LocalNeighborhood, sigma: T, initial: &MembershipVector<T>) -> Result<Self> {
        let n = view.len();
        let mut ctx = ObjectiveContext {
            view,
            sigma,
            values: vec![T::zero(); n],
            seed: vec![false; n],
            support: BTreeSet::new(),
            a_cc: T::zero(),
            a_cv: T::zero(),
            squares: T::zero(),
        };
        let outside = |v| Error::invalid(format!("node {v} lies outside the neighborhood"));
        for v in initial.seeds().iter() {
            let i = view.local_id(v).ok_or_else(|| outside(v))?;
            ctx.seed[i] = true;
        }
        for (v, x) in initial.iter() {
            let i = view.local_id(v).ok_or_else(|| outside(v))?;
            ctx.values[i] = x;
            if x != T::zero() {
                ctx.support.insert(i);
            }
        }
        ctx.recompute();
        Ok(ctx)
    }

    pub fn view(&self) -> &'n LocalNeighborhood {
        self.view
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn value_at(&self, i: usize) -> T {
        self.values[i]
    }

    pub fn floor_at(&self, i: usize) -> T {
        if self.seed[i] {
            T::one()
        } else {
            T::zero()
        }
    }

    pub fn is_seed(&self, i: usize) -> bool {
        self.seed[i]
    }

    pub fn a_cc(&self) -> T {
        self.a_cc
    }

    pub fn a_cv(&self) -> T {
        self.a_cv
    }

    pub fn squares(&self) -> T {
        self.squares
    }

    /// Local indices with a nonzero coordinate.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().copied()
    }

    fn fresh_sums(&self) -> (T, T, T) {
        let mut a_cc = T::zero();
        let mut a_cv = T::zero();
        let mut squares = T::zero();
        for &i in &self.support {
            let x = self.values[i];
            let d = T::from_count(self.view.degree(i));
            a_cv = a_cv + x * d;
            squares = squares + x * x * d;
            a_cc = a_cc + x * self.a_ic(i);
        }
        (a_cc, a_cv, squares)
    }

    /// Recomputes the caches from the current coordinates.
    pub fn recompute(&mut self) {
        (self.a_cc, self.a_cv, self.squares) = self.fresh_sums();
    }

    /// Compares the caches with a recomputation from scratch.
    pub fn audit(&self) -> Result<()> {
        let tol = T::lit(1e-9).max(T::lit(1e3) * T::epsilon());
        let (a_cc, a_cv, squares) = self.fresh_sums();
        for (name, cached, fresh) in [
            ("a_cc", self.a_cc, a_cc),
            ("a_cV", self.a_cv, a_cv),
            ("sum c_i^2 d_i", self.squares, squares),
        ] {
            if (cached - fresh).abs() > tol * fresh.abs().max(T::one()) {
                return Err(Error::CacheDrift {
                    quantity: name,
                    cached: cached.as_f64(),
                    recomputed: fresh.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// `a_ic = Σ_j a_ij c_j`.
    pub fn a_ic(&self, i: usize) -> T {
        self.view.neighbors(i).iter().map(|&j| self.values[j]).sum()
    }

    /// Current `φ_σ(c)`.
    pub fn value(&self) -> Result<T> {
        if self.a_cv <= T::zero() {
            return Err(Error::UndefinedObjective("membership has zero weighted volume"));
        }
        Ok(T::one() - self.a_cc / self.a_cv - self.sigma * self.squares / self.a_cv)
    }

    /// `∇φ_σ(c)_i` from the cached sums.
    pub fn gradient_at(&self, i: usize) -> T {
        let two = T::lit(2.0);
        let d = T::from_count(self.view.degree(i));
        let vol2 = self.a_cv * self.a_cv;
        d * self.a_cc / vol2 - two * self.a_ic(i) / self.a_cv
            + self.sigma * (d * self.squares / vol2 - two * self.values[i] * d / self.a_cv)
    }

    /// Gradient over `touched` (local indices).
    pub fn gradient(&self, touched: &[usize]) -> Result<Vec<T>> {
        if self.a_cv <= T::zero() {
            return Err(Error::UndefinedObjective("membership has zero weighted volume"));
        }
        Ok(touched.iter().map(|&i| self.gradient_at(i)).collect())
    }

    /// Support, its neighbors in the neighborhood, and the seeds, ascending.
    /// Every other coordinate is zero with a nonnegative gradient.
    pub fn touched(&self) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &i in &self.support {
            out.insert(i);
            out.extend(self.view.neighbors(i).iter().copied());
        }
        out.extend((0..self.seed.len()).filter(|&i| self.seed[i]));
        out.into_iter().collect()
    }

    /// Sets coordinate `i` to `x`, updating the caches.
    pub fn set(&mut self, i: usize, x: T) {
        let old = self.values[i];
        if old == x {
            return;
        }
        let delta = x - old;
        let d = T::from_count(self.view.degree(i));
        self.a_cc = self.a_cc + T::lit(2.0) * delta * self.a_ic(i);
        self.a_cv = self.a_cv + delta * d;
        self.squares = self.squares + (x * x - old * old) * d;
        self.values[i] = x;
        if x == T::zero() {
            self.support.remove(&i);
        } else {
            self.support.insert(i);
        }
    }

    /// Applies `changes` in order.
    pub fn apply(&mut self, changes: &[(usize, T)]) {
        for &(i, x) in changes {
            self.set(i, x);
        }
    }

    /// `φ_σ` after applying `changes`; the context is left exactly as it was.
    pub fn value_with(&mut self, changes: &[(usize, T)]) -> Result<T> {
        let caches = (self.a_cc, self.a_cv, self.squares);
        let saved: Vec<(usize, T)> = changes.iter().map(|&(i, _)| (i, self.values[i])).collect();
        self.apply(changes);
        let value = self.value();
        for &(i, x) in saved.iter().rev() {
            self.values[i] = x;
            if x == T::zero() {
                self.support.remove(&i);
            } else {
                self.support.insert(i);
            }
        }
        (self.a_cc, self.a_cv, self.squares) = caches;
        value
    }

    /// Seed-floored KKT violation over the touched coordinates.
    pub fn kkt_residual(&self) -> Result<T> {
        let touched = self.touched();
        let grad = self.gradient(&touched)?;
        Ok(touched
            .iter()
            .zip(grad)
            .map(|(&i, g)| kkt_violation(self.values[i], self.floor_at(i), g))
            .fold(T::zero(), T::max))
    }

    /// `{ i | c_i ≥ threshold }` in graph ids.
    pub fn threshold(&self, threshold: T) -> NodeSet {
        self.support
            .iter()
            .filter(|&&i| self.values[i] >= threshold)
            .map(|&i| self.view.global_id(i))
            .collect()
    }

    /// The current coordinates as a sparse vector in graph ids.
    pub fn membership(&self) -> MembershipVector<T> {
        let seeds: NodeSet = (0..self.seed.len())
            .filter(|&i| self.seed[i])
            .map(|i| self.view.global_id(i))
            .collect();
        MembershipVector::from_values(self.support.iter().map(|&i| (self.view.global_id(i), self.values[i])))
            .with_seeds(&seeds)
    }
}
