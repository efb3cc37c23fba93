use serde::Serialize;

use crate::decoders::DecoderKind;

/// 95% Wilson score interval for an error proportion.
pub fn confidence_interval(errors: u64, total: u64) -> (f64, f64) {
    assert!(
        total >= 1 && errors <= total,
        "need 0 <= errors <= total, total >= 1"
    );
    const Z: f64 = 1.96;
    let n = total as f64;
    let p = errors as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if errors == total {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

pub fn intervals_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Counters for one decoder at one sweep coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecoderStats {
    pub decoder: DecoderKind,
    pub bit_errors: u64,
    pub bits_total: u64,
    /// Complex-symbol errors (a symbol is wrong if either real dimension is).
    pub symbol_errors: u64,
    pub symbols_total: u64,
    pub vectors_total: u64,
    pub erasures: u64,
    pub flops_total: u64,
    pub sd_nodes_visited: u64,
    /// Zero unless timing was enabled.
    pub wall_time_ns: u128,
    pub wall_time_sq_ns2: u128,
    pub timed_decodes: u64,
}

impl DecoderStats {
    pub fn new(decoder: DecoderKind) -> Self {
        Self {
            decoder,
            bit_errors: 0,
            bits_total: 0,
            symbol_errors: 0,
            symbols_total: 0,
            vectors_total: 0,
            erasures: 0,
            flops_total: 0,
            sd_nodes_visited: 0,
            wall_time_ns: 0,
            wall_time_sq_ns2: 0,
            timed_decodes: 0,
        }
    }

    pub fn merge(&mut self, o: &DecoderStats) {
        debug_assert_eq!(self.decoder, o.decoder);
        self.bit_errors += o.bit_errors;
        self.bits_total += o.bits_total;
        self.symbol_errors += o.symbol_errors;
        self.symbols_total += o.symbols_total;
        self.vectors_total += o.vectors_total;
        self.erasures += o.erasures;
        self.flops_total += o.flops_total;
        self.sd_nodes_visited += o.sd_nodes_visited;
        self.wall_time_ns += o.wall_time_ns;
        self.wall_time_sq_ns2 += o.wall_time_sq_ns2;
        self.timed_decodes += o.timed_decodes;
    }

    pub fn ber(&self) -> f64 {
        ratio(self.bit_errors, self.bits_total)
    }

    pub fn ber_interval(&self) -> (f64, f64) {
        if self.bits_total == 0 {
            return (0.0, 1.0);
        }
        confidence_interval(self.bit_errors, self.bits_total)
    }

    pub fn ser(&self) -> f64 {
        ratio(self.symbol_errors, self.symbols_total)
    }

    pub fn flops_mean(&self) -> f64 {
        ratio(self.flops_total, self.vectors_total)
    }

    pub fn nodes_mean(&self) -> f64 {
        ratio(self.sd_nodes_visited, self.vectors_total)
    }

    pub fn timed(&self) -> bool {
        self.timed_decodes > 0
    }

    pub fn time_ns_per_decode(&self) -> f64 {
        self.wall_time_ns as f64 / self.timed_decodes.max(1) as f64
    }

    pub fn time_ns_per_bit(&self) -> f64 {
        self.wall_time_ns as f64 / self.bits_total.max(1) as f64
    }

    /// Standard error of the mean per-decode wall time.
    pub fn time_ns_stderr(&self) -> f64 {
        let n = self.timed_decodes as f64;
        if n < 2.0 {
            return f64::INFINITY;
        }
        let mean = self.wall_time_ns as f64 / n;
        let var = (self.wall_time_sq_ns2 as f64 - n * mean * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Accumulated statistics at one `(snr_db, kappa)` coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub kappa: f64,
    pub channels: u64,
    pub forced_channels: u64,
    /// Wall time spent building channels (QR, split, condition number);
    /// zero unless timing was enabled.
    pub setup_time_ns: u128,
    pub stats: Vec<DecoderStats>,
}

impl BerPoint {
    pub(crate) fn empty(snr_db: f64, kappa: f64, decoders: &[DecoderKind]) -> Self {
        Self {
            snr_db,
            kappa,
            channels: 0,
            forced_channels: 0,
            setup_time_ns: 0,
            stats: decoders.iter().map(|&d| DecoderStats::new(d)).collect(),
        }
    }

    pub(crate) fn merge(&mut self, o: &BerPoint) {
        self.channels += o.channels;
        self.forced_channels += o.forced_channels;
        self.setup_time_ns += o.setup_time_ns;
        for (a, b) in self.stats.iter_mut().zip(&o.stats) {
            a.merge(b);
        }
    }

    pub fn get(&self, d: DecoderKind) -> Option<&DecoderStats> {
        self.stats.iter().find(|s| s.decoder == d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let (lo, hi) = confidence_interval(0, 100);
        assert_eq!(lo, 0.0);
        // z²/(n + z²)
        assert!((hi - 3.8416 / 103.8416).abs() < 1e-12);
        assert!((hi - 0.0370).abs() < 1e-4);

        let (lo, hi) = confidence_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(((0.5 - lo) - (hi - 0.5)).abs() < 1e-12);

        let (_, hi) = confidence_interval(100, 100);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn overlap() {
        assert!(intervals_overlap((0.1, 0.2), (0.15, 0.3)));
        assert!(!intervals_overlap((0.1, 0.2), (0.21, 0.3)));
    }
}
