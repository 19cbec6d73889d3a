//! Thickness-controlled edge extraction.
//!
//! The edge band of thickness `d_e` is obtained by correlating a one-vs-rest
//! mask with a cross-shaped integer kernel of side `n = 2*d_e + 1` whose
//! center weight is `4*d_e` and whose central row and column carry `-1`.
//! The kernel weights sum to zero, so uniform regions respond with zero and
//! the positive response marks interior pixels within `d_e` of the region's
//! complement along some axis.

use crate::error::{Error, Result};
use crate::raster::{convolve_same, BinaryMask, LabelMap};

/// Cross-shaped integer kernel for a given edge thickness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeKernel {
    thickness: usize,
    side: usize,
    weights: Vec<i64>,
}

impl EdgeKernel {
    pub fn thickness(&self) -> usize {
        self.thickness
    }

    /// Kernel side length, `2 * thickness + 1`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Row-major weights, `side * side` entries.
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
}

/// Builds the cross kernel for thickness `d_e >= 1`.
pub fn kernel_for_thickness(d_e: usize) -> Result<EdgeKernel> {
    if d_e < 1 {
        return Err(Error::InvalidThickness(d_e as i64));
    }
    let side = 2 * d_e + 1;
    let mut weights = vec![0i64; side * side];
    for i in 0..side {
        weights[d_e * side + i] = -1;
        weights[i * side + d_e] = -1;
    }
    weights[d_e * side + d_e] = 4 * d_e as i64;
    Ok(EdgeKernel { thickness: d_e, side, weights })
}

/// Extracts the interior edge band of a binary region: pixels whose kernel
/// response is strictly positive. The positive criterion keeps the band on
/// the region side of the boundary with thickness `d_e`; accepting negative
/// responses would double the band onto the background side.
pub fn extract_edge_mask(region: &BinaryMask, d_e: usize) -> Result<BinaryMask> {
    let kernel = kernel_for_thickness(d_e)?;
    let resp = convolve_same(region, &kernel)?;
    let mut out = BinaryMask::filled(region.width(), region.height(), false);
    for y in 0..region.height() {
        for x in 0..region.width() {
            if resp[y * region.width() + x] > 0 {
                out.set(x, y, true);
            }
        }
    }
    Ok(out)
}

/// Extracts the edge label map: per class (ascending id), the interior edge
/// band of that class's one-vs-rest mask keeps the class label; everything
/// else becomes the ignore index. Non-edge pixels are never assigned a
/// class id, so an unmodified C-class head can consume the result directly.
pub fn extract_edge_label_map(gt: &LabelMap, d_e: usize) -> Result<LabelMap> {
    if gt.is_all_ignore() {
        return Err(Error::EmptyGt);
    }
    let mut out = LabelMap::with_ignore(
        gt.width(),
        gt.height(),
        gt.classes(),
        gt.ignore_index(),
        vec![gt.ignore_index(); gt.width() * gt.height()],
    )?;
    for c in 0..gt.classes() {
        let mask = gt.class_mask(c);
        if mask.is_empty_set() {
            continue;
        }
        let edges = extract_edge_mask(&mask, d_e)?;
        for y in 0..gt.height() {
            for x in 0..gt.width() {
                if edges.get(x, y) {
                    // Inner bands of disjoint regions cannot overlap.
                    assert_eq!(out.get(x, y), gt.ignore_index());
                    out.set(x, y, c);
                }
            }
        }
    }
    Ok(out)
}
