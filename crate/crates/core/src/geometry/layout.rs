use nalgebra::DMatrix;

use crate::strategy::Representation;

/// Offset added to every coordinate of the all-zero vertex before the
/// decomposition.
pub const LAYOUT_ZERO_SHIFT: f64 = 1e-6;

/// 3-D node coordinates from the three leading right-singular directions of
/// the centred vertex matrix.
///
/// Each direction's sign is fixed so that its largest-magnitude entry (first
/// one on ties) is positive.
pub fn svd_layout(rep: Representation) -> Vec<[f64; 3]> {
    let rows = rep.vertex_rows();
    let (n, dim) = (rows.len(), rep.dim());
    let mut x = DMatrix::from_fn(n, dim, |i, j| rows[i][j] as f64);
    for (i, row) in rows.iter().enumerate() {
        if row.iter().all(|&b| b == 0) {
            x.row_mut(i).add_scalar_mut(LAYOUT_ZERO_SHIFT);
        }
    }
    for j in 0..dim {
        let mean = x.column(j).mean();
        x.column_mut(j).add_scalar_mut(-mean);
    }

    let svd = x.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });

    let mut directions = Vec::with_capacity(3);
    for &k in order.iter().take(3) {
        let mut dir: Vec<f64> = v_t.row(k).iter().copied().collect();
        let pivot = dir
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if v.abs() > dir[best].abs() { i } else { best });
        if dir[pivot] < 0.0 {
            dir.iter_mut().for_each(|v| *v = -*v);
        }
        directions.push(dir);
    }

    (0..n)
        .map(|i| {
            let mut p = [0.0; 3];
            for (c, dir) in directions.iter().enumerate() {
                p[c] = x.row(i).iter().zip(dir).map(|(a, b)| a * b).sum();
            }
            p
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_shape_and_determinism() {
        for rep in [Representation::Full26, Representation::Reduced8] {
            let a = svd_layout(rep);
            let b = svd_layout(rep);
            assert_eq!(a.len(), rep.vertex_count());
            assert_eq!(a, b);
            assert!(a.iter().flatten().all(|v| v.is_finite()));
        }
    }

    #[test]
    fn layout_is_centred() {
        let layout = svd_layout(Representation::Reduced8);
        for c in 0..3 {
            let mean: f64 = layout.iter().map(|p| p[c]).sum::<f64>() / 16.0;
            assert!(mean.abs() < 1e-12);
        }
    }
}
