//! Raster types and the pixel-level primitives everything else builds on:
//! integer cross-correlation with replicate padding, the exact Euclidean
//! distance transform, and connected components.
//!
//! All rasters are row-major; `(x, y)` maps to index `y * width + x`.
//! Values are immutable after construction, so rasters are safe to share
//! across threads.

use crate::edge::EdgeKernel;
use crate::error::{Error, Result};

/// Reserved label value for pixels excluded from supervision and scoring.
pub const DEFAULT_IGNORE_INDEX: u8 = 255;

/// Integer class-id raster. Every stored id is `< classes` or equals
/// `ignore_index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    classes: u8,
    ignore_index: u8,
    data: Vec<u8>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, classes: u8, data: Vec<u8>) -> Result<Self> {
        Self::with_ignore(width, height, classes, DEFAULT_IGNORE_INDEX, data)
    }

    pub fn with_ignore(
        width: usize,
        height: usize,
        classes: u8,
        ignore_index: u8,
        data: Vec<u8>,
    ) -> Result<Self> {
        if classes == 0 {
            return Err(Error::InvalidInput("class count must be >= 1".into()));
        }
        if ignore_index < classes {
            return Err(Error::InvalidInput(format!(
                "ignore index {ignore_index} collides with class ids 0..{classes}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Shape(format!(
                "label data length {} != {}x{}",
                data.len(),
                width,
                height
            )));
        }
        if let Some(&bad) = data
            .iter()
            .find(|&&v| v >= classes && v != ignore_index)
        {
            return Err(Error::InvalidInput(format!(
                "label {bad} out of range for {classes} classes"
            )));
        }
        Ok(Self { width, height, classes, ignore_index, data })
    }

    /// Uniform map filled with `value` (a class id or the ignore index).
    pub fn filled(width: usize, height: usize, classes: u8, value: u8) -> Result<Self> {
        Self::new(width, height, classes, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn classes(&self) -> u8 {
        self.classes
    }
    pub fn ignore_index(&self) -> u8 {
        self.ignore_index
    }
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        debug_assert!(v < self.classes || v == self.ignore_index);
        self.data[y * self.width + x] = v;
    }

    /// One-vs-rest mask of class `c`; ignore pixels count as rest.
    pub fn class_mask(&self, c: u8) -> BinaryMask {
        BinaryMask::from_fn(self.width, self.height, |x, y| self.get(x, y) == c)
    }

    pub fn is_all_ignore(&self) -> bool {
        self.data.iter().all(|&v| v == self.ignore_index)
    }
}

/// Row-major {0,1} raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Shape(format!(
                "mask data length {} != {}x{}",
                data.len(),
                width,
                height
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        Self { width, height, data: vec![value; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count_set(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn is_empty_set(&self) -> bool {
        !self.data.iter().any(|&b| b)
    }

    /// Coordinates of set pixels in row-major order.
    pub fn set_pixels(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Single-channel raster of probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftMask {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl SoftMask {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Shape(format!(
                "soft mask data length {} != {}x{}",
                data.len(),
                width,
                height
            )));
        }
        if let Some(&bad) = data.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
            return Err(Error::InvalidInput(format!(
                "soft mask value {bad} outside [0, 1]"
            )));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    /// 1.0 on set pixels, 0.0 elsewhere.
    pub fn from_mask(mask: &BinaryMask) -> Self {
        Self {
            width: mask.width(),
            height: mask.height(),
            data: mask.data().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// Non-negative Euclidean pixel distances; zero exactly at source pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl DistanceMap {
    pub fn width(&self) -> usize {
        self.width
    }
    pub fn height(&self) -> usize {
        self.height
    }
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// Integer cross-correlation of a binary mask with an edge kernel, same-size
/// output, replicate (clamp-to-edge) padding. Replicate padding means a
/// uniform region touching the image border still produces zero response, so
/// the frame is never spuriously marked as an edge.
pub fn convolve_same(mask: &BinaryMask, kernel: &EdgeKernel) -> Result<Vec<i64>> {
    if mask.width() == 0 || mask.height() == 0 {
        return Err(Error::InvalidInput("empty mask".into()));
    }
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let side = kernel.side() as i64;
    let r = side / 2;
    let weights = kernel.weights();
    let mut out = vec![0i64; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0i64;
            for ky in -r..=r {
                for kx in -r..=r {
                    let kw = weights[((ky + r) * side + (kx + r)) as usize];
                    if kw == 0 {
                        continue;
                    }
                    let sx = (x + kx).clamp(0, w - 1) as usize;
                    let sy = (y + ky).clamp(0, h - 1) as usize;
                    if mask.get(sx, sy) {
                        acc += kw;
                    }
                }
            }
            out[(y * w + x) as usize] = acc;
        }
    }
    Ok(out)
}

/// Exact Euclidean distance transform: distance from every pixel to the
/// nearest set pixel of `sources`, via the Felzenszwalb–Huttenlocher
/// lower-envelope algorithm on squared distances (exact, not chamfer).
pub fn exact_edt(sources: &BinaryMask) -> Result<DistanceMap> {
    if sources.is_empty_set() {
        return Err(Error::EmptySourceSet);
    }
    let (w, h) = (sources.width(), sources.height());
    const INF: f64 = 1e20;

    // Column pass: 1D squared distance along each column.
    let mut g = vec![0.0f64; w * h];
    let mut f = vec![0.0f64; h.max(w)];
    let mut d = vec![0.0f64; h.max(w)];
    let mut v = vec![0usize; h.max(w)];
    let mut z = vec![0.0f64; h.max(w) + 1];
    for x in 0..w {
        for y in 0..h {
            f[y] = if sources.get(x, y) { 0.0 } else { INF };
        }
        dt_1d(&f[..h], &mut d, &mut v, &mut z);
        for y in 0..h {
            g[y * w + x] = d[y];
        }
    }

    // Row pass over the column results.
    let mut out = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            f[x] = g[y * w + x];
        }
        dt_1d(&f[..w], &mut d, &mut v, &mut z);
        for x in 0..w {
            out[y * w + x] = d[x].sqrt();
        }
    }
    Ok(DistanceMap { width: w, height: h, data: out })
}

/// 1D squared-distance transform of a sampled function via the lower
/// envelope of parabolas (Felzenszwalb & Huttenlocher).
fn dt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = -f64::INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let mut s;
        loop {
            let p = v[k];
            s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q - p) as f64);
            if s <= z[k] {
                if k == 0 {
                    break;
                }
                k -= 1;
            } else {
                break;
            }
        }
        if s > z[k] {
            k += 1;
        }
        v[k] = q;
        z[k] = s;
        z[k + 1] = f64::INFINITY;
    }
    let mut k = 0usize;
    for q in 0..n {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dq = q as f64 - p as f64;
        d[q] = dq * dq + f[p];
    }
}

/// Pixel connectivity for component labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

/// Sentinel component id for unset pixels.
pub const NO_COMPONENT: u32 = u32::MAX;

/// Labels connected components of set pixels. Ids are contiguous from 0 in
/// raster scan order; unset pixels get [`NO_COMPONENT`]. Returns the id
/// raster and the component count.
pub fn connected_components(mask: &BinaryMask, conn: Connectivity) -> (Vec<u32>, usize) {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut ids = vec![NO_COMPONENT; (w * h) as usize];
    let offsets: &[(i64, i64)] = match conn {
        Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        Connectivity::Eight => &[
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ],
    };
    let mut next = 0u32;
    let mut stack = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as usize;
            if !mask.data()[idx] || ids[idx] != NO_COMPONENT {
                continue;
            }
            ids[idx] = next;
            stack.push((x, y));
            while let Some((cx, cy)) = stack.pop() {
                for &(dx, dy) in offsets {
                    let (nx, ny) = (cx + dx, cy + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let nidx = (ny * w + nx) as usize;
                    if mask.data()[nidx] && ids[nidx] == NO_COMPONENT {
                        ids[nidx] = next;
                        stack.push((nx, ny));
                    }
                }
            }
            next += 1;
        }
    }
    (ids, next as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::kernel_for_thickness;

    /// Direct O(side² · w · h) correlation, the independent oracle for
    /// convolve_same.
    pub(crate) fn convolve_brute(mask: &BinaryMask, kernel: &EdgeKernel) -> Vec<i64> {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let side = kernel.side() as i64;
        let r = side / 2;
        let mut out = vec![0i64; (w * h) as usize];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0;
                for ky in -r..=r {
                    for kx in -r..=r {
                        let sx = (x + kx).clamp(0, w - 1) as usize;
                        let sy = (y + ky).clamp(0, h - 1) as usize;
                        let kw = kernel.weights()[((ky + r) * side + (kx + r)) as usize];
                        acc += kw * i64::from(mask.get(sx, sy));
                    }
                }
                out[(y * w + x) as usize] = acc;
            }
        }
        out
    }

    pub(crate) fn edt_brute(sources: &BinaryMask) -> Vec<f64> {
        let pts = sources.set_pixels();
        let mut out = vec![0.0; sources.width() * sources.height()];
        for y in 0..sources.height() {
            for x in 0..sources.width() {
                let best = pts
                    .iter()
                    .map(|&(sx, sy)| {
                        let dx = sx as f64 - x as f64;
                        let dy = sy as f64 - y as f64;
                        dx * dx + dy * dy
                    })
                    .fold(f64::INFINITY, f64::min);
                out[y * sources.width() + x] = best.sqrt();
            }
        }
        out
    }

    fn xorshift(state: &mut u64) -> u64 {
        let mut x = *state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        *state = x;
        x
    }

    fn random_mask(w: usize, h: usize, fill_per_16: u64, state: &mut u64) -> BinaryMask {
        BinaryMask::from_fn(w, h, |_, _| xorshift(state) % 16 < fill_per_16)
    }

    #[test]
    fn convolve_uniform_ones_is_zero() {
        let mask = BinaryMask::filled(8, 8, true);
        let k = kernel_for_thickness(2).unwrap();
        let resp = convolve_same(&mask, &k).unwrap();
        assert!(resp.iter().all(|&v| v == 0));
    }

    #[test]
    fn convolve_zeros_is_zero() {
        let mask = BinaryMask::filled(8, 8, false);
        for de in 1..=3 {
            let k = kernel_for_thickness(de).unwrap();
            let resp = convolve_same(&mask, &k).unwrap();
            assert!(resp.iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn convolve_centered_square_matches_brute_force() {
        // 16x16 with a centered 8x8 block of ones.
        let mask = BinaryMask::from_fn(16, 16, |x, y| (4..12).contains(&x) && (4..12).contains(&y));
        let k = kernel_for_thickness(1).unwrap();
        let resp = convolve_same(&mask, &k).unwrap();
        assert_eq!(resp, convolve_brute(&mask, &k));
        // Nonzero exactly on the two 1-pixel rings straddling the block edge.
        for y in 0..16usize {
            for x in 0..16usize {
                let inner_ring = mask.get(x, y)
                    && (x == 4 || x == 11 || y == 4 || y == 11);
                let outer_ring = !mask.get(x, y)
                    && (3..=12).contains(&x)
                    && (3..=12).contains(&y)
                    && (x == 3 || x == 12 || y == 3 || y == 12)
                    // corner pixels of the outer ring only touch diagonally
                    && !((x == 3 || x == 12) && (y == 3 || y == 12));
                let expect_nonzero = inner_ring || outer_ring;
                assert_eq!(resp[y * 16 + x] != 0, expect_nonzero, "at ({x},{y})");
            }
        }
    }

    #[test]
    fn convolve_random_matches_brute_force() {
        let mut state = 0x9e3779b97f4a7c15u64;
        for de in [1usize, 2, 3] {
            let k = kernel_for_thickness(de).unwrap();
            for _ in 0..20 {
                let mask = random_mask(13, 11, 8, &mut state);
                assert_eq!(convolve_same(&mask, &k).unwrap(), convolve_brute(&mask, &k));
            }
        }
    }

    #[test]
    fn convolve_empty_mask_is_invalid() {
        let mask = BinaryMask::new(0, 0, vec![]).unwrap();
        let k = kernel_for_thickness(1).unwrap();
        assert!(matches!(convolve_same(&mask, &k), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn edt_single_source_row() {
        let mut mask = BinaryMask::filled(5, 1, false);
        mask.set(0, 0, true);
        let d = exact_edt(&mask).unwrap();
        assert_eq!(d.data(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn edt_three_four_five() {
        let mut mask = BinaryMask::filled(6, 6, false);
        mask.set(0, 0, true);
        let d = exact_edt(&mask).unwrap();
        assert_eq!(d.get(3, 4), 5.0);
        assert_eq!(d.get(4, 3), 5.0);
    }

    #[test]
    fn edt_matches_brute_force_on_random_masks() {
        let mut state = 42u64;
        for _ in 0..25 {
            let mut mask = random_mask(12, 12, 3, &mut state);
            if mask.is_empty_set() {
                mask.set(5, 7, true);
            }
            let fast = exact_edt(&mask).unwrap();
            let brute = edt_brute(&mask);
            for (a, b) in fast.data().iter().zip(&brute) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn edt_no_sources_errors() {
        let mask = BinaryMask::filled(4, 4, false);
        assert!(matches!(exact_edt(&mask), Err(Error::EmptySourceSet)));
    }

    #[test]
    fn components_all_zero() {
        let mask = BinaryMask::filled(6, 6, false);
        let (_, count) = connected_components(&mask, Connectivity::Four);
        assert_eq!(count, 0);
    }

    #[test]
    fn components_two_blocks() {
        let mask = BinaryMask::from_fn(8, 8, |x, y| {
            ((1..3).contains(&x) && (1..3).contains(&y))
                || ((5..7).contains(&x) && (5..7).contains(&y))
        });
        let (ids, count) = connected_components(&mask, Connectivity::Four);
        assert_eq!(count, 2);
        assert_eq!(ids[1 * 8 + 1], 0);
        assert_eq!(ids[5 * 8 + 5], 1);
    }

    #[test]
    fn components_match_flood_fill_oracle() {
        // Oracle: recursive flood fill with an explicit partition check.
        fn flood(mask: &BinaryMask, conn: Connectivity) -> (Vec<u32>, usize) {
            let (w, h) = (mask.width() as i64, mask.height() as i64);
            let mut ids = vec![NO_COMPONENT; (w * h) as usize];
            fn go(
                mask: &BinaryMask,
                ids: &mut [u32],
                x: i64,
                y: i64,
                id: u32,
                conn: Connectivity,
            ) {
                let (w, h) = (mask.width() as i64, mask.height() as i64);
                if x < 0 || y < 0 || x >= w || y >= h {
                    return;
                }
                let idx = (y * w + x) as usize;
                if !mask.data()[idx] || ids[idx] != NO_COMPONENT {
                    return;
                }
                ids[idx] = id;
                go(mask, ids, x + 1, y, id, conn);
                go(mask, ids, x - 1, y, id, conn);
                go(mask, ids, x, y + 1, id, conn);
                go(mask, ids, x, y - 1, id, conn);
                if matches!(conn, Connectivity::Eight) {
                    go(mask, ids, x + 1, y + 1, id, conn);
                    go(mask, ids, x + 1, y - 1, id, conn);
                    go(mask, ids, x - 1, y + 1, id, conn);
                    go(mask, ids, x - 1, y - 1, id, conn);
                }
            }
            let mut next = 0;
            for y in 0..h {
                for x in 0..w {
                    if mask.data()[(y * w + x) as usize] && ids[(y * w + x) as usize] == NO_COMPONENT
                    {
                        go(mask, &mut ids, x, y, next, conn);
                        next += 1;
                    }
                }
            }
            (ids, next as usize)
        }

        let mut state = 7u64;
        for conn in [Connectivity::Four, Connectivity::Eight] {
            for _ in 0..15 {
                let mask = random_mask(16, 16, 6, &mut state);
                let (ids, count) = connected_components(&mask, conn);
                let (oracle_ids, oracle_count) = flood(&mask, conn);
                assert_eq!(count, oracle_count);
                assert_eq!(ids, oracle_ids);
            }
        }
    }
}
