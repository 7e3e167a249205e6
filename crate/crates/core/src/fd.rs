//! Central finite differences in the free chart.

use crate::error::Result;
use crate::potential::FreeCoords;

/// `J[i][j] ≈ ∂f_i/∂u_j` by central differences with step `h`.
pub fn central_jacobian<F>(f: F, u: &FreeCoords, h: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&FreeCoords) -> Result<Vec<f64>>,
{
    let mut cols = Vec::with_capacity(u.len());
    for j in 0..u.len() {
        let mut plus = u.clone();
        let mut minus = u.clone();
        plus.0[j] += h;
        minus.0[j] -= h;
        let (fp, fm) = (f(&plus)?, f(&minus)?);
        cols.push(
            fp.iter()
                .zip(&fm)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect::<Vec<f64>>(),
        );
    }
    let rows = cols.first().map_or(0, Vec::len);
    Ok((0..rows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect())
}

/// Gradient of a scalar function of the free coordinates.
pub fn central_gradient<F>(f: F, u: &FreeCoords, h: f64) -> Result<Vec<f64>>
where
    F: Fn(&FreeCoords) -> Result<f64>,
{
    Ok(central_jacobian(|v| Ok(vec![f(v)?]), u, h)?
        .pop()
        .unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let u = FreeCoords(vec![1.0, -2.0]);
        let g = central_gradient(|v| Ok(v.0[0] * v.0[0] + 3.0 * v.0[1]), &u, 1e-4).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-9 && (g[1] - 3.0).abs() < 1e-9);
    }
}
