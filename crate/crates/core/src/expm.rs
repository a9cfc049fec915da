//! Matrix exponential by scaling-and-squaring with a degree-13 Padé
//! approximant (Higham 2005). Sufficient for the anti-Hermitian generators
//! used here; accuracy is cross-checked against closed forms in tests.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tensor::Operator;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// theta_13 from Higham's backward-error analysis
const THETA13: f64 = 5.371920351148152;

/// exp(A) for a square matrix A.
pub fn expm(a: &Operator) -> Result<Operator> {
    if a.rows() != a.cols() {
        return Err(Error::Shape(format!("expm needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let d = a.rows();
    let norm = one_norm(a);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale(C64::new(0.5f64.powi(s), 0.0));

    let a2 = scaled.mul(&scaled)?;
    let a4 = a2.mul(&a2)?;
    let a6 = a4.mul(&a2)?;
    let id = Operator::identity(d)?;

    // u = A (b13 A6 + b11 A4 + b9 A2) A6 + A (b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = lincomb(&[(PADE13[13], &a6), (PADE13[11], &a4), (PADE13[9], &a2)])?;
    let w2 = lincomb(&[
        (PADE13[7], &a6),
        (PADE13[5], &a4),
        (PADE13[3], &a2),
        (PADE13[1], &id),
    ])?;
    let u = scaled.mul(&w1.mul(&a6)?.add(&w2)?)?;
    // v = (b12 A6 + b10 A4 + b8 A2) A6 + b6 A6 + b4 A4 + b2 A2 + b0 I
    let z1 = lincomb(&[(PADE13[12], &a6), (PADE13[10], &a4), (PADE13[8], &a2)])?;
    let v = z1.mul(&a6)?.add(&lincomb(&[
        (PADE13[6], &a6),
        (PADE13[4], &a4),
        (PADE13[2], &a2),
        (PADE13[0], &id),
    ])?)?;

    // solve (v - u) x = (v + u)
    let lhs = v.sub(&u)?;
    let rhs = v.add(&u)?;
    let mut x = solve(&lhs, &rhs)?;
    for _ in 0..s {
        x = x.mul(&x)?;
    }
    Ok(x)
}

fn lincomb(terms: &[(f64, &Operator)]) -> Result<Operator> {
    let (rows, cols) = (terms[0].1.rows(), terms[0].1.cols());
    let mut out = Operator::zeros(rows, cols)?;
    for &(coef, m) in terms {
        out = out.add(&m.scale(C64::new(coef, 0.0)))?;
    }
    Ok(out)
}

fn one_norm(a: &Operator) -> f64 {
    let mut best = 0.0f64;
    for j in 0..a.cols() {
        let col: f64 = (0..a.rows()).map(|i| a.get(i, j).norm()).sum();
        best = best.max(col);
    }
    best
}

/// Solve A X = B by LU with partial pivoting.
fn solve(a: &Operator, b: &Operator) -> Result<Operator> {
    let n = a.rows();
    let mut lu: Vec<C64> = a.entries().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let mut pivot = k;
        let mut best = lu[k * n + k].norm();
        for i in k + 1..n {
            let v = lu[i * n + k].norm();
            if v > best {
                best = v;
                pivot = i;
            }
        }
        if best == 0.0 {
            return Err(Error::Domain("singular matrix in expm solve".into()));
        }
        if pivot != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot * n + j);
            }
            perm.swap(k, pivot);
        }
        let diag = lu[k * n + k];
        for i in k + 1..n {
            let f = lu[i * n + k] / diag;
            lu[i * n + k] = f;
            for j in k + 1..n {
                let sub = f * lu[k * n + j];
                lu[i * n + j] -= sub;
            }
        }
    }

    let mut x = Operator::zeros(n, b.cols())?;
    for c in 0..b.cols() {
        // forward substitution on permuted rhs
        let mut y = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = b.get(perm[i], c);
            for j in 0..i {
                acc -= lu[i * n + j] * y[j];
            }
            y[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= lu[i * n + j] * x.get(j, c);
            }
            x.set(i, c, acc / lu[i * n + i]);
        }
    }
    Ok(x)
}
