//! Finite abelian groups: presentations by enumeration, Smith normal form,
//! invariant factors and discrete logarithms.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::arith::factor;
use crate::error::{internal, invalid};
use crate::Result;

/// Invariant factors d₁ | d₂ | … | d_k, all > 1, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianGroupStructure {
    invariants: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Structure of a product of cyclic groups of the given orders.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        // primary decomposition, then recombine largest prime powers
        let mut by_prime: HashMap<u64, Vec<u64>> = HashMap::new();
        for &n in orders {
            for (p, k) in factor(n) {
                by_prime.entry(p).or_default().push(p.pow(k));
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut inv = vec![1u64; len];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.iter().enumerate() {
                inv[len - 1 - i] *= q;
            }
        }
        inv.retain(|&d| d > 1);
        AbelianGroupStructure { invariants: inv }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Number of cyclic factors of order divisible by p, i.e. dim G/pG.
    pub fn p_rank(&self, p: u64) -> usize {
        self.invariants.iter().filter(|&&d| d % p == 0).count()
    }

    pub fn p_part(&self, p: u64) -> AbelianGroupStructure {
        let parts: Vec<u64> = self
            .invariants
            .iter()
            .map(|&d| {
                let mut q = 1;
                let mut d = d;
                while d % p == 0 {
                    d /= p;
                    q *= p;
                }
                q
            })
            .filter(|&q| q > 1)
            .collect();
        AbelianGroupStructure { invariants: parts }
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }
}

pub type Matrix = Vec<Vec<i128>>;

/// Smith form of a relation matrix R (rows are relations): R·V = U·D with U
/// and V unimodular. Only the column transform is tracked, together with its
/// inverse, which is all that is needed to change generators.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Diagonal entries (length = number of columns; 0 for free directions).
    pub diagonal: Vec<i128>,
    pub v: Matrix,
    pub v_inv: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn smith(relations: &[Vec<i128>], ncols: usize) -> Smith {
    let mut a: Matrix = relations.to_vec();
    for row in &a {
        assert_eq!(row.len(), ncols, "ragged relation matrix");
    }
    let nrows = a.len();
    let mut v = identity(ncols);
    let mut v_inv = identity(ncols);

    // column ops: col_j += k col_i  ⇒ V ← V·E, V⁻¹ ← E⁻¹·V⁻¹ (row_i −= k row_j)
    let col_add = |a: &mut Matrix, v: &mut Matrix, vi: &mut Matrix, j: usize, i: usize, k: i128| {
        if k == 0 {
            return;
        }
        for row in a.iter_mut() {
            row[j] += k * row[i];
        }
        for row in v.iter_mut() {
            row[j] += k * row[i];
        }
        for c in 0..vi[0].len() {
            let t = vi[j][c];
            vi[i][c] -= k * t;
        }
    };
    let col_swap = |a: &mut Matrix, v: &mut Matrix, vi: &mut Matrix, i: usize, j: usize| {
        if i == j {
            return;
        }
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };

    let mut diagonal = vec![0i128; ncols];
    for t in 0..ncols.min(nrows) {
        loop {
            // smallest nonzero entry of the remaining block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..ncols {
                    if a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, &mut v_inv, t, pj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..nrows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in tail[0].iter_mut().zip(&head[t]) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..ncols {
                let q = a[t][j].div_euclid(p);
                col_add(&mut a, &mut v, &mut v_inv, j, t, -q);
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if t < nrows {
            diagonal[t] = a[t][t].abs();
        }
    }
    Smith {
        diagonal,
        v,
        v_inv,
    }
}

/// Group given by generators and relations, enumerated so every element
/// has known coordinates.
#[derive(Clone, Debug)]
pub struct Presentation<T> {
    pub generators: Vec<T>,
    pub relations: Vec<Vec<i128>>,
    pub coords: HashMap<T, Vec<i128>>,
}

/// Enumerates the subgroup generated by `elements` (typically the whole
/// group), picking generators greedily in iteration order.
pub fn present<T, I, F>(elements: I, identity: T, op: F) -> Presentation<T>
where
    T: Clone + Eq + Hash,
    I: IntoIterator<Item = T>,
    F: Fn(&T, &T) -> T,
{
    let mut coords: HashMap<T, Vec<i128>> = HashMap::new();
    coords.insert(identity.clone(), Vec::new());
    let mut generators: Vec<T> = Vec::new();
    let mut relations: Vec<Vec<i128>> = Vec::new();
    for x in elements {
        if coords.contains_key(&x) {
            continue;
        }
        let k = generators.len();
        // order of x modulo the current subgroup
        let mut power = x.clone();
        let mut m = 1i128;
        while !coords.contains_key(&power) {
            power = op(&power, &x);
            m += 1;
        }
        let mut rel = coords[&power].iter().map(|c| -c).collect::<Vec<_>>();
        rel.resize(k, 0);
        rel.push(m);
        for r in relations.iter_mut() {
            r.push(0);
        }
        relations.push(rel);

        let old: Vec<(T, Vec<i128>)> = coords.drain().collect();
        for (h, c) in old {
            let mut c = c;
            c.resize(k + 1, 0);
            let mut y = h;
            for j in 0..m {
                let mut cj = c.clone();
                cj[k] = j;
                if j + 1 < m {
                    let next = op(&y, &x);
                    coords.insert(y, cj);
                    y = next;
                } else {
                    coords.insert(y.clone(), cj);
                }
            }
        }
        generators.push(x);
    }
    let n = generators.len();
    for c in coords.values_mut() {
        c.resize(n, 0);
    }
    Presentation {
        generators,
        relations,
        coords,
    }
}

/// A finite abelian group given by a presentation, reduced to Smith form.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub structure: AbelianGroupStructure,
    /// Columns of the Smith form carrying nontrivial invariants, in the
    /// same order as `structure.invariants()`.
    active: Vec<usize>,
    smith: Smith,
    ngens: usize,
}

impl Decomposition {
    /// Finite group ℤ^ngens / ⟨relations⟩.
    pub fn new(relations: &[Vec<i128>], ngens: usize) -> Result<Decomposition> {
        if ngens == 0 {
            return Ok(Decomposition {
                structure: AbelianGroupStructure::trivial(),
                active: Vec::new(),
                smith: smith(&[], 0),
                ngens,
            });
        }
        let s = smith(relations, ngens);
        if s.diagonal.contains(&0) {
            return Err(invalid("relations do not define a finite group"));
        }
        let mut active: Vec<usize> = (0..ngens).filter(|&j| s.diagonal[j] > 1).collect();
        active.sort_by_key(|&j| s.diagonal[j]);
        let invariants: Vec<u64> = active.iter().map(|&j| s.diagonal[j] as u64).collect();
        for w in invariants.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(internal("Smith diagonal lost divisibility"));
            }
        }
        Ok(Decomposition {
            structure: AbelianGroupStructure { invariants },
            active,
            smith: s,
            ngens,
        })
    }

    /// Coordinates in the invariant-factor basis of the element with
    /// coordinates `x` in the original generators.
    pub fn dlog(&self, x: &[i128]) -> Vec<i128> {
        assert_eq!(x.len(), self.ngens);
        self.active
            .iter()
            .map(|&j| {
                let y: i128 = (0..self.ngens).map(|i| x[i] * self.smith.v[i][j]).sum();
                y.rem_euclid(self.smith.diagonal[j])
            })
            .collect()
    }

    /// The invariant-factor basis expressed in the original generators.
    pub fn basis_words(&self) -> Vec<Vec<i128>> {
        self.active
            .iter()
            .map(|&j| self.smith.v_inv[j].clone())
            .collect()
    }
}

/// Structure of an enumerated group.
pub fn structure_of<T, I, F>(elements: I, identity: T, op: F) -> Result<AbelianGroupStructure>
where
    T: Clone + Eq + Hash,
    I: IntoIterator<Item = T>,
    F: Fn(&T, &T) -> T,
{
    let pres = present(elements, identity, op);
    Ok(Decomposition::new(&pres.relations, pres.generators.len())?.structure)
}
