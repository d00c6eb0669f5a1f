//! Frames and Gram-Schmidt orthonormalization with respect to a metric.

#[allow(unused_imports)]
use crate::float::FloatExt as _;
use crate::linalg::MatN;
use crate::{GeoError, Result};

/// Orthonormalize the columns of `frame` with respect to the inner product
/// `g` (classical Gram-Schmidt with re-normalization). The orientation of
/// the input frame is preserved.
pub fn orthonormalize(g: &MatN, frame: &MatN) -> Result<MatN> {
    let n = g.dim();
    let mut out = MatN::zeros(n);
    for j in 0..n {
        let mut v = frame.col(j);
        for i in 0..j {
            let e = out.col(i);
            let c = g.quad(&e, &v);
            v = v.axpy(-c, &e);
        }
        let len2 = g.quad(&v, &v);
        if !(len2 > 1e-24) {
            return Err(GeoError::DegenerateFrame);
        }
        out.set_col(j, &v.scale(1.0 / len2.sqrt()));
    }
    Ok(out)
}
