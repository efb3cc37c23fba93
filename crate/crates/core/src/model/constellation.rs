use serde::Serialize;

use super::ModelError;

/// Square q-QAM as the product of two √q-level PAM axes with a reflected
/// Gray labeling on each axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constellation {
    order: u32,
    side: usize,
    bits_per_pam: u32,
    scale: f64,
    levels: Vec<f64>,
}

impl Constellation {
    /// Builds the unit-average-energy q-QAM, `q ∈ {4, 16, 64, 256}`.
    pub fn new(order: u32) -> Result<Self, ModelError> {
        if !matches!(order, 4 | 16 | 64 | 256) {
            return Err(ModelError::UnsupportedOrder(order));
        }
        let side = (order as f64).sqrt().round() as usize;
        let bits_per_pam = side.trailing_zeros();
        // Mean energy of a complex symbol with odd-integer levels is 2(q-1)/3.
        let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
        let levels = (0..side)
            .map(|i| Self::unscaled_level(side, i) * scale)
            .collect();
        Ok(Self {
            order,
            side,
            bits_per_pam,
            scale,
            levels,
        })
    }

    fn unscaled_level(side: usize, i: usize) -> f64 {
        (2 * i) as f64 - (side - 1) as f64
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Number of PAM levels per real dimension (√q).
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn bits_per_pam(&self) -> u32 {
        self.bits_per_pam
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Scaled PAM amplitudes, ascending.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Odd-integer amplitudes before normalization.
    pub fn unscaled_levels(&self) -> Vec<i32> {
        (0..self.side)
            .map(|i| Self::unscaled_level(self.side, i) as i32)
            .collect()
    }

    /// Gray label of level `index`.
    pub fn gray_label(&self, index: usize) -> u32 {
        let i = index as u32;
        i ^ (i >> 1)
    }

    /// Level index carrying Gray label `label`.
    pub fn index_of_label(&self, label: u32) -> usize {
        let mut i = label;
        let mut shift = label >> 1;
        while shift != 0 {
            i ^= shift;
            shift >>= 1;
        }
        i as usize
    }

    /// Index of the level nearest to `v`, clamped to the outermost levels.
    #[inline]
    pub fn nearest_index(&self, v: f64) -> usize {
        let t = ((v / self.scale + (self.side - 1) as f64) / 2.0).round();
        t.clamp(0.0, (self.side - 1) as f64) as usize
    }
}

/// Per-dimension level indices of a real symbol vector, with the matching
/// amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolVector {
    indices: Vec<u16>,
}

impl SymbolVector {
    pub fn from_indices(indices: Vec<u16>) -> Self {
        Self { indices }
    }

    pub fn indices(&self) -> &[u16] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Amplitudes, bit-identical to entries of `c.levels()`.
    pub fn values(&self, c: &Constellation) -> Vec<f64> {
        self.indices.iter().map(|&i| c.levels[i as usize]).collect()
    }
}

/// Per-dimension slicer `⌊·⌉` onto the PAM levels. Values beyond the
/// outermost levels clamp to them.
pub fn slice(v: &[f64], c: &Constellation) -> Result<SymbolVector, ModelError> {
    if let Some(pos) = v.iter().position(|x| !x.is_finite()) {
        return Err(ModelError::NonFinite(pos));
    }
    Ok(SymbolVector {
        indices: v.iter().map(|&x| c.nearest_index(x) as u16).collect(),
    })
}

/// Maps `m · bits_per_pam` bits (one byte per bit, MSB first within each
/// dimension) to an `m`-dimensional symbol vector.
pub fn bits_to_symbols(
    bits: &[u8],
    c: &Constellation,
    m: usize,
) -> Result<SymbolVector, ModelError> {
    let b = c.bits_per_pam as usize;
    if bits.len() != m * b {
        return Err(ModelError::LengthMismatch {
            expected: m * b,
            got: bits.len(),
        });
    }
    let indices = bits
        .chunks(b)
        .map(|chunk| {
            let label = chunk
                .iter()
                .fold(0u32, |acc, &bit| (acc << 1) | u32::from(bit & 1));
            c.index_of_label(label) as u16
        })
        .collect();
    Ok(SymbolVector { indices })
}

pub fn symbols_to_bits(sym: &SymbolVector, c: &Constellation) -> Vec<u8> {
    let b = c.bits_per_pam;
    let mut bits = Vec::with_capacity(sym.len() * b as usize);
    for &i in &sym.indices {
        let label = c.gray_label(i as usize);
        for k in (0..b).rev() {
            bits.push(((label >> k) & 1) as u8);
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sixteen_qam_levels_and_scale() {
        let c = Constellation::new(16).unwrap();
        assert_eq!(c.unscaled_levels(), vec![-3, -1, 1, 3]);
        assert!((c.scale() - 1.0 / 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.bits_per_pam(), 2);
        let labels: Vec<u32> = (0..4).map(|i| c.gray_label(i)).collect();
        assert_eq!(labels, vec![0b00, 0b01, 0b11, 0b10]);
    }

    #[test]
    fn qpsk_levels() {
        let c = Constellation::new(4).unwrap();
        assert_eq!(c.unscaled_levels(), vec![-1, 1]);
        assert!((c.scale() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unsupported_orders() {
        for q in [0, 2, 8, 32, 128, 512, 1024] {
            assert_eq!(Constellation::new(q), Err(ModelError::UnsupportedOrder(q)));
        }
    }

    #[test]
    fn unit_energy_for_every_order() {
        for q in [4, 16, 64, 256] {
            let c = Constellation::new(q).unwrap();
            let per_dim: f64 = c.levels().iter().map(|l| l * l).sum::<f64>() / c.side() as f64;
            assert!((2.0 * per_dim - 1.0).abs() < 1e-12, "q={q}");
        }
    }

    #[test]
    fn gray_neighbors_differ_in_one_bit() {
        for q in [4, 16, 64, 256] {
            let c = Constellation::new(q).unwrap();
            for i in 1..c.side() {
                assert_eq!((c.gray_label(i) ^ c.gray_label(i - 1)).count_ones(), 1);
            }
            for i in 0..c.side() {
                assert_eq!(c.index_of_label(c.gray_label(i)), i);
            }
        }
    }

    #[test]
    fn slicing() {
        let c = Constellation::new(16).unwrap();
        let s = c.scale();
        let sym = slice(&[1.2 * s, 5.7 * s, -0.1 * s, -9.0 * s], &c).unwrap();
        assert_eq!(sym.indices(), &[2, 3, 1, 0]);
        let vals = sym.values(&c);
        assert_eq!(vals[0], s);
        assert_eq!(vals[1], 3.0 * s);
        for &l in c.levels() {
            assert_eq!(
                slice(&[l], &c).unwrap().values(&c)[0].to_bits(),
                l.to_bits()
            );
        }
        assert_eq!(slice(&[0.0, f64::NAN], &c), Err(ModelError::NonFinite(1)));
    }

    #[test]
    fn bit_mapping_table() {
        let c = Constellation::new(16).unwrap();
        let s = bits_to_symbols(&[0, 0, 1, 0, 0, 1, 1, 1], &c, 4).unwrap();
        assert_eq!(s.indices(), &[0, 3, 1, 2]);
        assert_eq!(
            bits_to_symbols(&[0, 1, 1], &c, 2),
            Err(ModelError::LengthMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn bits_round_trip(
            q in prop::sample::select(vec![4u32, 16, 64, 256]),
            m in 1usize..9,
            seed in any::<u64>(),
        ) {
            let c = Constellation::new(q).unwrap();
            let n = m * c.bits_per_pam() as usize;
            let bits: Vec<u8> = (0..n).map(|k| ((seed >> (k % 64)) & 1) as u8 ^ (k as u8 & 1)).collect();
            let sym = bits_to_symbols(&bits, &c, m).unwrap();
            prop_assert_eq!(symbols_to_bits(&sym, &c), bits);
        }
    }
}
