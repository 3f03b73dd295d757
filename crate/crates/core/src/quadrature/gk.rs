//! Tensor-product Gauss–Kronrod 7/15 rule on axis-aligned cells.

use crate::model::MAX_DIM;

/// Kronrod abscissae on [-1, 1], ascending.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the abscissae XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) const POINTS: usize = 15;

/// (abscissa, kronrod weight, gauss weight) for the 15 nodes in ascending order.
fn node(i: usize) -> (f64, f64, f64) {
    let (j, sign) = if i < 8 { (i, -1.0) } else { (14 - i, 1.0) };
    let g = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
    (sign * XGK[j], WGK[j], g)
}

/// Precomputed 1-D tables.
pub(crate) struct Rule {
    x: [f64; POINTS],
    wk: [f64; POINTS],
    wg: [f64; POINTS],
}

impl Rule {
    pub fn new() -> Self {
        let mut r = Rule {
            x: [0.0; POINTS],
            wk: [0.0; POINTS],
            wg: [0.0; POINTS],
        };
        for i in 0..POINTS {
            let (x, k, g) = node(i);
            r.x[i] = x;
            r.wk[i] = k;
            r.wg[i] = g;
        }
        r
    }

    /// Kronrod and Gauss estimates of `∫_cell f`.
    pub fn apply(&self, f: &mut impl FnMut(&[f64]) -> f64, lo: &[f64], hi: &[f64]) -> (f64, f64) {
        let dim = lo.len();
        let mut centre = [0.0; MAX_DIM];
        let mut half = [0.0; MAX_DIM];
        let mut volume = 1.0;
        for d in 0..dim {
            centre[d] = 0.5 * (lo[d] + hi[d]);
            half[d] = 0.5 * (hi[d] - lo[d]);
            volume *= half[d];
        }
        let mut point = [0.0; MAX_DIM];
        let mut kron = 0.0;
        let mut gauss = 0.0;
        let total = POINTS.pow(dim as u32);
        let mut idx = [0usize; MAX_DIM];
        for _ in 0..total {
            let mut wk = 1.0;
            let mut wg = 1.0;
            for d in 0..dim {
                point[d] = centre[d] + half[d] * self.x[idx[d]];
                wk *= self.wk[idx[d]];
                wg *= self.wg[idx[d]];
            }
            let v = f(&point[..dim]);
            kron += wk * v;
            gauss += wg * v;
            for slot in idx.iter_mut().take(dim) {
                *slot += 1;
                if *slot < POINTS {
                    break;
                }
                *slot = 0;
            }
        }
        (kron * volume, gauss * volume)
    }
}
