//! Shared variable table. The order of variables is fixed at creation and
//! never changes afterwards, so monomial comparisons and printed forms are
//! deterministic for the lifetime of the table.

use std::collections::HashMap;
use std::sync::Arc;

/// Role of a variable in the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Coordinate `x_j`, `j = 0..=n`. `x0` is the homogenizing slot and is
    /// treated as the constant 1 inside all computations.
    Coord(usize),
    /// Dual-point variable `a_j` (alpha).
    Alpha(usize),
    /// Dual-point variable `b_j` (beta).
    Beta(usize),
    /// Pluecker variable `g{j1,j2}` with `j1 < j2`. The antisymmetric
    /// partner `g{j2,j1}` is represented by negation.
    Gamma(usize, usize),
    /// Flow parameter `t`.
    Time,
    /// Chart variable `xi_k`, `k >= 1`.
    Chart(usize),
}

/// Index of a variable inside its table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Ordered list of named variables: coordinates, dual points, Pluecker
/// variables, the flow parameter and chart variables.
#[derive(Debug, PartialEq, Eq)]
pub struct VarTable {
    n: usize,
    chart_vars: usize,
    kinds: Vec<VarKind>,
    names: Vec<String>,
    by_name: HashMap<String, Var>,
}

impl VarTable {
    /// Table for affine `n`-space plus `chart_vars` blow-up chart variables.
    pub fn new(n: usize, chart_vars: usize) -> Arc<VarTable> {
        assert!(n >= 1, "need at least one coordinate");
        let mut kinds = Vec::new();
        for j in 0..=n {
            kinds.push(VarKind::Coord(j));
        }
        for j in 0..=n {
            kinds.push(VarKind::Alpha(j));
        }
        for j in 0..=n {
            kinds.push(VarKind::Beta(j));
        }
        for j1 in 0..=n {
            for j2 in (j1 + 1)..=n {
                kinds.push(VarKind::Gamma(j1, j2));
            }
        }
        kinds.push(VarKind::Time);
        for k in 1..=chart_vars {
            kinds.push(VarKind::Chart(k));
        }
        let names: Vec<String> = kinds.iter().map(|k| kind_name(*k)).collect();
        let by_name = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Var(i)))
            .collect();
        Arc::new(VarTable {
            n,
            chart_vars,
            kinds,
            names,
            by_name,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chart_var_count(&self) -> usize {
        self.chart_vars
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self, v: Var) -> VarKind {
        self.kinds[v.0]
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.0]
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    /// Coordinate variable `x_j`, `j = 0..=n`.
    pub fn x(&self, j: usize) -> Var {
        assert!(j <= self.n);
        Var(j)
    }

    pub fn alpha(&self, j: usize) -> Var {
        assert!(j <= self.n);
        Var(self.n + 1 + j)
    }

    pub fn beta(&self, j: usize) -> Var {
        assert!(j <= self.n);
        Var(2 * (self.n + 1) + j)
    }

    /// Stored Pluecker variable for the pair `j1 < j2`.
    pub fn gamma(&self, j1: usize, j2: usize) -> Var {
        assert!(j1 < j2 && j2 <= self.n);
        // offset of (j1,j2) within the lexicographic pair listing
        let mut off = 0;
        for i in 0..j1 {
            off += self.n - i;
        }
        off += j2 - j1 - 1;
        Var(3 * (self.n + 1) + off)
    }

    /// Pluecker variable for an arbitrary ordered pair, with the sign of the
    /// antisymmetric normalization: `g{j2,j1} = -g{j1,j2}`.
    pub fn gamma_signed(&self, j1: usize, j2: usize) -> Option<(Var, i32)> {
        if j1 == j2 || j1 > self.n || j2 > self.n {
            return None;
        }
        if j1 < j2 {
            Some((self.gamma(j1, j2), 1))
        } else {
            Some((self.gamma(j2, j1), -1))
        }
    }

    pub fn time(&self) -> Var {
        let pairs = (self.n + 1) * self.n / 2;
        Var(3 * (self.n + 1) + pairs)
    }

    /// Chart variable `xi_k`, `k = 1..=chart_vars`.
    pub fn xi(&self, k: usize) -> Var {
        assert!(k >= 1 && k <= self.chart_vars);
        Var(self.time().0 + k)
    }

    /// All stored Pluecker variables in table order.
    pub fn gamma_vars(&self) -> impl Iterator<Item = (Var, usize, usize)> + '_ {
        (0..self.len()).filter_map(move |i| match self.kinds[i] {
            VarKind::Gamma(j1, j2) => Some((Var(i), j1, j2)),
            _ => None,
        })
    }
}

fn kind_name(kind: VarKind) -> String {
    match kind {
        VarKind::Coord(j) => format!("x{j}"),
        VarKind::Alpha(j) => format!("a{j}"),
        VarKind::Beta(j) => format!("b{j}"),
        VarKind::Gamma(j1, j2) => format!("g{{{j1},{j2}}}"),
        VarKind::Time => "t".to_string(),
        VarKind::Chart(k) => format!("xi{k}"),
    }
}
