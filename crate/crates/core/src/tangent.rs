//! Bernoulli numbers and the odd derivatives of `tan` at zero, computed two
//! ways in exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangentError {
    #[error("tangent derivatives at zero vanish for even order {0}; pass an odd order")]
    EvenOrder(usize),
    #[error("order must be at least 1")]
    ZeroOrder,
}

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one(); n + 1];
    for k in 1..n {
        row[k] = &row[k - 1] * BigInt::from(n - k + 1) / BigInt::from(k);
    }
    row
}

/// `B_0 .. B_max` from `sum_{j<=n} C(n+1, j) B_j = 0` (so `B_1 = -1/2`).
pub fn bernoulli_table(max: usize) -> Vec<ExactRational> {
    let mut b: Vec<ExactRational> = Vec::with_capacity(max + 1);
    b.push(ExactRational::one());
    for n in 1..=max {
        let c = binomial_row(n + 1);
        let s = (0..n).fold(ExactRational::zero(), |acc, j| {
            acc + ExactRational::from_integer(c[j].clone()) * &b[j]
        });
        b.push(-s / ExactRational::from_integer(c[n].clone()));
    }
    b
}

pub fn bernoulli(n: usize) -> ExactRational {
    bernoulli_table(n).pop().expect("table holds B_0")
}

/// `tan^(2n-1)(0) = B_2n (-4)^n (1 - 4^n) / (2n)`.
fn tangent_from_bernoulli(b2n: &ExactRational, n: usize) -> BigInt {
    let four_n = BigInt::from(4).pow(n as u32);
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let factor = BigInt::from(sign) * &four_n * (BigInt::one() - &four_n);
    let value = b2n * ExactRational::from_integer(factor)
        / ExactRational::from_integer(BigInt::from(2 * n));
    assert!(
        value.is_integer(),
        "tangent formula produced a non-integer at n = {n}: {value}"
    );
    value.to_integer()
}

/// Entringer triangle: `E(0,0) = 1`, `E(n,0) = 0`,
/// `E(n,k) = E(n,k-1) + E(n-1,n-k)`. Row `n` ends in the zigzag number
/// `E_n`, which for odd `n` is `tan^(n)(0)`.
pub fn zigzag_numbers(max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    let mut prev = vec![BigInt::one()];
    for n in 1..=max {
        let mut row = vec![BigInt::zero(); n + 1];
        for k in 1..=n {
            row[k] = &row[k - 1] + &prev[n - k];
        }
        out.push(row[n].clone());
        prev = row;
    }
    out
}

/// `tan^(order)(0)` for odd `order`, by the Bernoulli closed form, checked
/// against the zigzag triangle.
pub fn tangent_derivative(order: usize) -> Result<BigInt, TangentError> {
    check_order(order)?;
    let m = order.div_ceil(2);
    Ok(TangentTable::new(m).values[m - 1].clone())
}

fn check_order(order: usize) -> Result<(), TangentError> {
    if order == 0 {
        Err(TangentError::ZeroOrder)
    } else if order.is_even() {
        Err(TangentError::EvenOrder(order))
    } else {
        Ok(())
    }
}

/// `values[m-1] = tan^(2m-1)(0)` for `m = 1..=max_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentTable {
    pub max_index: usize,
    pub values: Vec<BigInt>,
}

impl TangentTable {
    /// Builds the table from Bernoulli numbers and panics if the zigzag
    /// triangle disagrees anywhere.
    pub fn new(max_index: usize) -> Self {
        let b = bernoulli_table(2 * max_index);
        let zig = zigzag_numbers(2 * max_index);
        let values: Vec<BigInt> = (1..=max_index)
            .map(|m| {
                let v = tangent_from_bernoulli(&b[2 * m], m);
                assert_eq!(
                    v,
                    zig[2 * m - 1],
                    "closed form and zigzag disagree at m = {m}"
                );
                assert!(v.is_positive());
                v
            })
            .collect();
        TangentTable { max_index, values }
    }

    /// `tan^(2m-1)(0)` for 1-based `m`.
    pub fn get(&self, m: usize) -> Option<&BigInt> {
        m.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (i + 1, 2 * i + 1, v))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("m,order,value\n");
        for (m, order, v) in self.rows() {
            s.push_str(&format!("{m},{order},{v}\n"));
        }
        s
    }
}
