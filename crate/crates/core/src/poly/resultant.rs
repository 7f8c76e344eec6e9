use thiserror::Error;

use super::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("discriminant of a polynomial of degree 0 in the variable")]
pub struct DegenerateDiscriminant;

/// Resultant of `p` and `q` with respect to `var`: the determinant of their
/// Sylvester matrix, computed by fraction-free elimination. Not normalized.
pub fn resultant(p: &Polynomial, q: &Polynomial, var: usize) -> Polynomial {
    if p.is_zero() || q.is_zero() {
        return Polynomial::zero();
    }
    let m = p.degree(var) as usize;
    let n = q.degree(var) as usize;
    match (m, n) {
        (0, 0) => return Polynomial::one(),
        (0, _) => return p.pow(n as u32),
        (_, 0) => return q.pow(m as u32),
        _ => {}
    }
    let pc = p.coefficients(var);
    let qc = q.coefficients(var);
    let size = m + n;
    let mut mat = vec![vec![Polynomial::zero(); size]; size];
    for i in 0..n {
        for (k, c) in pc.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    bareiss(mat)
}

fn bareiss(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("Bareiss step is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// Normalized `res(p, dp/dvar)`.
pub fn discriminant(p: &Polynomial, var: usize) -> Result<Polynomial, DegenerateDiscriminant> {
    if p.degree(var) == 0 {
        return Err(DegenerateDiscriminant);
    }
    Ok(resultant(p, &p.derivative(var), var).normalize())
}
