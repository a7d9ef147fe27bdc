//! Root data for the supported simple Lie algebras.
//!
//! Cartan convention: `cartan[i][j] = alpha_j(H_i) = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i)`.
//! Positive roots are stored in simple-root coordinates, ordered by height
//! and, within one height, by descending lexicographic order of the
//! coordinates (so `alpha_1` comes before `alpha_2`).

use std::collections::HashMap;
use std::fmt;

use exact_linalg::Rational;
use serde::{Deserialize, Serialize};

use crate::BrstError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::E => "E",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = BrstError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(BrstError::Config(format!("unknown algebra family {other:?}"))),
        }
    }
}

/// Signed root handle: `+(k+1)` is the k-th positive root, `-(k+1)` its negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(i32);

impl Root {
    pub fn pos(k: usize) -> Root {
        Root(k as i32 + 1)
    }
    pub fn neg(k: usize) -> Root {
        Root(-(k as i32) - 1)
    }
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
    /// Index of the positive root `|self|`.
    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }
    pub fn negate(self) -> Root {
        Root(-self.0)
    }
    pub fn sign(self) -> i64 {
        if self.0 > 0 {
            1
        } else {
            -1
        }
    }
}

/// A weight given by its values `<lambda, H_i>` on the simple coroots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub coords: Vec<Rational>,
}

impl Weight {
    pub fn from_ints(v: &[i64]) -> Weight {
        Weight { coords: v.iter().map(|&x| Rational::from_int(x)).collect() }
    }

    pub fn integral(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|x| x.to_i64()).collect()
    }

    pub fn parse(s: &str) -> Result<Weight, BrstError> {
        let coords = s
            .split(',')
            .map(|t| t.trim().parse::<Rational>().map_err(|e| BrstError::Config(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Weight { coords })
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub family: Family,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// `d_i = (alpha_i, alpha_i) / 2`, normalised so the short roots have `d = 1`.
    pub symmetrizer: Vec<i64>,
    /// Positive roots in simple-root coordinates.
    pub positive: Vec<Vec<i64>>,
    /// `beta(H_i)` for every positive root beta.
    pub values: Vec<Vec<i64>>,
    /// Coordinates `h^i` of `H_beta = sum_i h^i H_i`.
    pub coroots: Vec<Vec<Rational>>,
    lookup: HashMap<Vec<i64>, Root>,
    structure: Vec<i64>,
}

fn cartan_matrix(family: Family, l: usize) -> Result<Vec<Vec<i64>>, BrstError> {
    let unsupported = || BrstError::Config(format!("unsupported algebra {family}{l}"));
    let ok = match family {
        Family::A => (1..=4).contains(&l),
        Family::B | Family::C => (2..=4).contains(&l),
        Family::D => l == 4,
        Family::F => l == 4,
        Family::G => l == 2,
        Family::E => false,
    };
    if !ok {
        return Err(unsupported());
    }
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    match family {
        Family::A | Family::B | Family::C | Family::F => {
            for i in 0..l - 1 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            match family {
                Family::B => a[l - 1][l - 2] = -2,
                Family::C => a[l - 2][l - 1] = -2,
                Family::F => a[2][1] = -2,
                _ => {}
            }
        }
        Family::D => {
            for (i, j) in [(0, 1), (1, 2), (1, 3)] {
                a[i][j] = -1;
                a[j][i] = -1;
            }
        }
        Family::G => {
            a[0][1] = -3;
            a[1][0] = -1;
        }
        Family::E => unreachable!(),
    }
    Ok(a)
}

fn symmetrizer(a: &[Vec<i64>]) -> Vec<i64> {
    let l = a.len();
    let mut d: Vec<Option<Rational>> = vec![None; l];
    d[0] = Some(Rational::one());
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..l {
            if i != j && a[i][j] != 0 && d[j].is_none() {
                // d_i A[i][j] = d_j A[j][i]
                let dj = d[i].as_ref().unwrap() * &Rational::new(a[i][j], a[j][i]);
                d[j] = Some(dj);
                stack.push(j);
            }
        }
    }
    let d: Vec<Rational> = d.into_iter().map(|x| x.expect("connected Dynkin diagram")).collect();
    let min = d.iter().min().unwrap().clone();
    d.iter()
        .map(|x| (x / &min).to_i64().expect("integral symmetrizer"))
        .collect()
}

impl RootDatum {
    pub fn new(family: Family, rank: usize) -> Result<RootDatum, BrstError> {
        let cartan = cartan_matrix(family, rank)?;
        let symmetrizer = symmetrizer(&cartan);
        let l = rank;
        let value = |k: &[i64], i: usize| -> i64 { (0..l).map(|j| k[j] * cartan[i][j]).sum() };

        let mut found: Vec<Vec<i64>> = Vec::new();
        let mut seen: std::collections::HashSet<Vec<i64>> = Default::default();
        let mut layer: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut e = vec![0; l];
                e[i] = 1;
                e
            })
            .collect();
        while !layer.is_empty() {
            for r in &layer {
                seen.insert(r.clone());
            }
            found.extend(layer.iter().cloned());
            let mut next: Vec<Vec<i64>> = Vec::new();
            for beta in &layer {
                for i in 0..l {
                    // p = length of the alpha_i string below beta
                    let mut p = 0;
                    let mut down = beta.clone();
                    loop {
                        down[i] -= 1;
                        if seen.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let q = p - value(beta, i);
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !next.contains(&up) {
                            next.push(up);
                        }
                    }
                }
            }
            layer = next;
        }
        found.sort_by(|x, y| {
            let hx: i64 = x.iter().sum();
            let hy: i64 = y.iter().sum();
            hx.cmp(&hy).then_with(|| y.cmp(x))
        });

        let values: Vec<Vec<i64>> = found.iter().map(|k| (0..l).map(|i| value(k, i)).collect()).collect();
        let coroots: Vec<Vec<Rational>> = found
            .iter()
            .map(|k| {
                // (beta, beta)/2 in units of the symmetrizer
                let norm: i64 = (0..l)
                    .flat_map(|i| (0..l).map(move |j| (i, j)))
                    .map(|(i, j)| k[i] * k[j] * symmetrizer[i] * cartan[i][j])
                    .sum();
                let d_beta = norm / 2;
                (0..l).map(|i| Rational::new(k[i] * symmetrizer[i], d_beta)).collect()
            })
            .collect();
        let mut lookup = HashMap::new();
        for (k, r) in found.iter().enumerate() {
            lookup.insert(r.clone(), Root::pos(k));
            lookup.insert(r.iter().map(|x| -x).collect(), Root::neg(k));
        }
        let mut datum = RootDatum {
            family,
            rank,
            cartan,
            symmetrizer,
            positive: found,
            values,
            coroots,
            lookup,
            structure: Vec::new(),
        };
        datum.structure = crate::chevalley::structure_constants(&datum)?;
        Ok(datum)
    }

    /// Number of positive roots.
    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn dim(&self) -> usize {
        self.rank + 2 * self.positive.len()
    }

    pub fn all_roots(&self) -> impl Iterator<Item = Root> + '_ {
        let m = self.positive.len();
        (0..m).map(Root::pos).chain((0..m).map(Root::neg))
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = Root> + '_ {
        (0..self.positive.len()).map(Root::pos)
    }

    /// Position of a root in `0..2m`: positives first.
    pub fn slot(&self, r: Root) -> usize {
        if r.is_positive() {
            r.index()
        } else {
            self.positive.len() + r.index()
        }
    }

    pub fn simple(&self, i: usize) -> Root {
        self.lookup[&{
            let mut e = vec![0; self.rank];
            e[i] = 1;
            e
        }]
    }

    pub fn coords(&self, r: Root) -> Vec<i64> {
        let c = &self.positive[r.index()];
        if r.is_positive() {
            c.clone()
        } else {
            c.iter().map(|x| -x).collect()
        }
    }

    pub fn root_of(&self, coords: &[i64]) -> Option<Root> {
        self.lookup.get(coords).copied()
    }

    pub fn height(&self, r: Root) -> i64 {
        self.coords(r).iter().sum()
    }

    pub fn sum(&self, a: Root, b: Root) -> Option<Root> {
        let s: Vec<i64> = self.coords(a).iter().zip(self.coords(b)).map(|(x, y)| x + y).collect();
        self.root_of(&s)
    }

    /// `beta(H_i)`.
    pub fn value(&self, beta: Root, i: usize) -> i64 {
        beta.sign() * self.values[beta.index()][i]
    }

    /// Coordinates of `H_beta`; `H_{-beta} = -H_beta`.
    pub fn coroot(&self, beta: Root) -> Vec<Rational> {
        let c = &self.coroots[beta.index()];
        if beta.is_positive() {
            c.clone()
        } else {
            c.iter().map(|x| -x).collect()
        }
    }

    /// `<lambda, H_beta>` for a weight in simple-coroot coordinates.
    pub fn pair(&self, lambda: &Weight, beta: Root) -> Rational {
        self.coroot(beta).iter().zip(&lambda.coords).map(|(h, x)| h * x).sum()
    }

    /// `beta'(H_beta) = 2 (beta', beta)/(beta, beta)`.
    pub fn root_pair(&self, other: Root, beta: Root) -> Rational {
        let h = self.coroot(beta);
        (0..self.rank).map(|i| &h[i] * &Rational::from_int(self.value(other, i))).sum()
    }

    /// Structure constant `N_{ab}` in `[tau_a, tau_b] = N_{ab} tau_{a+b}`, zero
    /// when `a + b` is not a root.
    pub fn n(&self, a: Root, b: Root) -> i64 {
        let w = 2 * self.positive.len();
        self.structure[self.slot(a) * w + self.slot(b)]
    }

    pub fn rho(&self) -> Weight {
        Weight::from_ints(&vec![1; self.rank])
    }

    /// Highest root in simple-coroot coordinates.
    pub fn highest_root_weight(&self) -> Vec<i64> {
        let top = self.positive.last().expect("nonempty root system");
        (0..self.rank).map(|i| (0..self.rank).map(|j| top[j] * self.cartan[i][j]).sum()).collect()
    }

    /// Weyl dimension formula.
    pub fn weyl_dimension(&self, lambda: &[i64]) -> Rational {
        let mut acc = Rational::one();
        let lr = Weight::from_ints(&lambda.iter().map(|x| x + 1).collect::<Vec<_>>());
        let rho = self.rho();
        for b in self.positive_roots() {
            acc = &acc * &(&self.pair(&lr, b) / &self.pair(&rho, b));
        }
        acc
    }

    /// Simple-root coordinates of a weight given in simple-coroot
    /// coordinates, `None` outside the root lattice.
    pub fn to_root_coords(&self, w: &[i64]) -> Option<Vec<i64>> {
        let inv = self.cartan_inverse();
        let mut out = Vec::with_capacity(self.rank);
        for row in &inv {
            let x: Rational = row.iter().zip(w).map(|(a, b)| a * &Rational::from_int(*b)).sum();
            out.push(x.to_i64()?);
        }
        Some(out)
    }

    /// Inverse of the map `k -> (sum_j k_j cartan[i][j])_i`.
    fn cartan_inverse(&self) -> Vec<Vec<Rational>> {
        let m = exact_linalg::SparseMatrix::from_int_rows(&self.cartan);
        let inv = exact_linalg::inverse(&m).expect("square").expect("Cartan matrix is invertible");
        inv.to_dense()
    }
}

/// The numbers `r_alpha = <chi + 2 rho, H_alpha>` (sign-odd in alpha).
#[derive(Clone, Debug)]
pub struct AnomalyCoefficients {
    pub chi: Weight,
    values: Vec<Rational>,
}

impl AnomalyCoefficients {
    /// Strict form: `chi` must be regular dominant.
    pub fn new(datum: &RootDatum, chi: &Weight) -> Result<AnomalyCoefficients, BrstError> {
        Self::with_policy(datum, chi, false)
    }

    /// With `allow_singular` a dominant `chi` on a wall is accepted; every
    /// `r_alpha` is still positive because `rho` is regular.
    pub fn with_policy(datum: &RootDatum, chi: &Weight, allow_singular: bool) -> Result<AnomalyCoefficients, BrstError> {
        if chi.coords.len() != datum.rank {
            return Err(BrstError::Config(format!(
                "chi has {} coordinates, rank is {}",
                chi.coords.len(),
                datum.rank
            )));
        }
        let ok = chi.coords.iter().all(|x| if allow_singular { x.signum() >= 0 } else { x.signum() > 0 });
        if !ok {
            return Err(BrstError::Config("chi not regular dominant".into()));
        }
        let shifted = Weight {
            coords: chi.coords.iter().map(|x| x + &Rational::from_int(2)).collect(),
        };
        let values = datum.positive_roots().map(|b| datum.pair(&shifted, b)).collect();
        Ok(AnomalyCoefficients { chi: chi.clone(), values })
    }

    pub fn r(&self, a: Root) -> Rational {
        let v = &self.values[a.index()];
        if a.is_positive() {
            v.clone()
        } else {
            -v
        }
    }
}
