//! XY spin configurations, sparse couplings and the XY Hamiltonian
//! `H(θ) = −Σ_{k<l} J_kl cos(θ_k − θ_l)`.

use rand::Rng;

use crate::{Error, Result, Scalar};

fn two_pi<T: Scalar>() -> T {
    T::PI() + T::PI()
}

/// Wraps a finite angle into `[−π, π)`.
pub fn wrap_phase<T: Scalar>(angle: T) -> Result<T> {
    if !angle.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    Ok(wrap_unchecked(angle))
}

pub(crate) fn wrap_unchecked<T: Scalar>(angle: T) -> T {
    let pi = T::PI();
    if angle >= -pi && angle < pi {
        return angle;
    }
    let tau = two_pi::<T>();
    let mut r = angle - tau * ((angle + pi) / tau).floor();
    // floor() can land one period off when angle + π rounds onto a multiple of 2π
    if r >= pi {
        r = r - tau;
    }
    if r < -pi {
        r = r + tau;
    }
    r
}

/// State of `N` planar spins, each angle stored wrapped into `[−π, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfig<T> {
    theta: Vec<T>,
}

impl<T: Scalar> PhaseConfig<T> {
    pub fn new(theta: Vec<T>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::invalid("n_spins", "must be positive"));
        }
        let theta = theta
            .into_iter()
            .map(wrap_phase)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { theta })
    }

    /// All spins pointing along `angle`.
    pub fn aligned(n_spins: usize, angle: T) -> Result<Self> {
        Self::new(vec![angle; n_spins])
    }

    /// Independent uniform angles on `[−π, π)`.
    pub fn uniform_random<R: Rng + ?Sized>(n_spins: usize, rng: &mut R) -> Result<Self> {
        if n_spins == 0 {
            return Err(Error::invalid("n_spins", "must be positive"));
        }
        let tau = two_pi::<T>();
        let theta = (0..n_spins)
            .map(|_| wrap_unchecked(T::sample_unit(rng) * tau - T::PI()))
            .collect();
        Ok(Self { theta })
    }

    /// Builds a configuration from unwrapped simulator state.
    pub(crate) fn from_raw(raw: &[T]) -> Self {
        Self {
            theta: raw.iter().map(|&x| wrap_unchecked(x)).collect(),
        }
    }

    pub fn n_spins(&self) -> usize {
        self.theta.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.theta
    }

    pub fn into_vec(self) -> Vec<T> {
        self.theta
    }

    pub fn get(&self, k: usize) -> Option<T> {
        self.theta.get(k).copied()
    }

    pub fn set(&mut self, k: usize, angle: T) -> Result<()> {
        let n = self.theta.len();
        let slot = self
            .theta
            .get_mut(k)
            .ok_or_else(|| Error::invalid("k", format!("index {k} out of range for {n} spins")))?;
        *slot = wrap_phase(angle)?;
        Ok(())
    }

    /// Same configuration rotated by a global offset.
    pub fn rotated(&self, offset: T) -> Result<Self> {
        Self::new(self.theta.iter().map(|&t| t + offset).collect())
    }

    /// Ring-neighbour relative phases `θ_{k+1} − θ_k` (with `θ_N = θ_0`),
    /// wrapped into `[−π, π)`.
    pub fn ring_relative_phases(&self) -> Vec<T> {
        let n = self.theta.len();
        (0..n)
            .map(|k| wrap_unchecked(self.theta[(k + 1) % n] - self.theta[k]))
            .collect()
    }
}

/// One undirected coupling, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<T> {
    pub a: usize,
    pub b: usize,
    pub weight: T,
}

/// Sparse symmetric coupling matrix `J_kl`, one entry per unordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph<T> {
    n_spins: usize,
    edges: Vec<Edge<T>>,
    offsets: Vec<usize>,
    neighbors: Vec<(usize, T)>,
}

impl<T: Scalar> CouplingGraph<T> {
    pub fn new<I>(n_spins: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        if n_spins == 0 {
            return Err(Error::invalid("n_spins", "must be positive"));
        }
        let mut list = Vec::new();
        for (k, l, w) in edges {
            if k >= n_spins || l >= n_spins {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({k}, {l}) out of range for {n_spins} spins"),
                ));
            }
            if k == l {
                return Err(Error::invalid("edges", format!("self-coupling at {k}")));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite("J_kl"));
            }
            let (a, b) = if k < l { (k, l) } else { (l, k) };
            list.push(Edge { a, b, weight: w });
        }
        let mut keys: Vec<(usize, usize)> = list.iter().map(|e| (e.a, e.b)).collect();
        keys.sort_unstable();
        if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(
                "edges",
                format!("duplicate edge ({}, {})", w[0].0, w[0].1),
            ));
        }

        let mut degree = vec![0usize; n_spins];
        for e in &list {
            degree[e.a] += 1;
            degree[e.b] += 1;
        }
        let mut offsets = Vec::with_capacity(n_spins + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n_spins].to_vec();
        let mut neighbors = vec![(0usize, T::zero()); offsets[n_spins]];
        for e in &list {
            neighbors[fill[e.a]] = (e.b, e.weight);
            fill[e.a] += 1;
            neighbors[fill[e.b]] = (e.a, e.weight);
            fill[e.b] += 1;
        }

        Ok(Self {
            n_spins,
            edges: list,
            offsets,
            neighbors,
        })
    }

    /// Periodic nearest-neighbour ring: edges `(k, k+1 mod n)` with weight `j`.
    ///
    /// Rings need at least three spins; at two the wrap-around edge would
    /// duplicate `(0, 1)`.
    pub fn ring(n_spins: usize, j: T) -> Result<Self> {
        if n_spins < 3 {
            return Err(Error::invalid(
                "n_spins",
                format!("ring needs at least 3 spins, got {n_spins}"),
            ));
        }
        Self::new(n_spins, (0..n_spins).map(|k| (k, (k + 1) % n_spins, j)))
    }

    /// Open nearest-neighbour chain.
    pub fn chain(n_spins: usize, j: T) -> Result<Self> {
        if n_spins < 2 {
            return Err(Error::invalid("n_spins", "chain needs at least 2 spins"));
        }
        Self::new(n_spins, (0..n_spins - 1).map(|k| (k, k + 1, j)))
    }

    /// No couplings at all.
    pub fn uncoupled(n_spins: usize) -> Result<Self> {
        Self::new(n_spins, std::iter::empty())
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    /// Neighbours of `k` with their coupling weights.
    pub fn neighbors(&self, k: usize) -> &[(usize, T)] {
        &self.neighbors[self.offsets[k]..self.offsets[k + 1]]
    }

    pub fn max_degree(&self) -> usize {
        self.offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_weight(&self) -> T {
        self.edges
            .iter()
            .map(|e| e.weight.abs())
            .fold(T::zero(), T::max)
    }

    /// `Σ |J_kl|`, the bound on `|H|`.
    pub fn total_abs_weight(&self) -> T {
        self.edges.iter().map(|e| e.weight.abs()).sum()
    }

    /// Largest row sum `max_k Σ_l |J_kl|`, which bounds the drift rate.
    pub fn max_row_weight(&self) -> T {
        (0..self.n_spins)
            .map(|k| self.neighbors(k).iter().map(|&(_, w)| w.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n_spins {
            return Err(Error::DimensionMismatch {
                expected: self.n_spins,
                got: n,
            });
        }
        Ok(())
    }
}

/// Value of the XY Hamiltonian, in units of `J`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Energy<T>(pub T);

impl<T: Copy> Energy<T> {
    pub fn value(self) -> T {
        self.0
    }
}

pub fn xy_energy<T: Scalar>(config: &PhaseConfig<T>, graph: &CouplingGraph<T>) -> Result<Energy<T>> {
    graph.check(config.n_spins())?;
    Ok(Energy(energy_of(config.as_slice(), graph)))
}

/// Energy of raw (possibly unwrapped) angles; the caller guarantees the length.
pub(crate) fn energy_of<T: Scalar>(theta: &[T], graph: &CouplingGraph<T>) -> T {
    let mut h = T::zero();
    for e in graph.edges() {
        h = h - e.weight * (theta[e.a] - theta[e.b]).cos();
    }
    h
}

/// `∂H/∂θ_k = Σ_{l≠k} J_kl sin(θ_k − θ_l)`.
pub fn xy_energy_gradient<T: Scalar>(
    config: &PhaseConfig<T>,
    graph: &CouplingGraph<T>,
) -> Result<Vec<T>> {
    graph.check(config.n_spins())?;
    let theta = config.as_slice();
    let mut grad = vec![T::zero(); theta.len()];
    for e in graph.edges() {
        let f = e.weight * (theta[e.a] - theta[e.b]).sin();
        grad[e.a] = grad[e.a] + f;
        grad[e.b] = grad[e.b] - f;
    }
    Ok(grad)
}
