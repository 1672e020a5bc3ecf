//! Wideband multi-beam receive pipeline for a uniform linear array:
//! synthesize antenna spectra, bin time series with a temporal DFT, and
//! form simultaneous frequency-independent beams with the fast delay
//! multiply per bin.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::apply::{direct_multiply, dvm_multiply, sdvm_multiply};
use crate::node::Node;
use crate::plan::{build_plan, FactorizationPlan};
use crate::DvmError;

/// Geometry and sampling of the receive chain.
///
/// `tau` is the per-element propagation delay `spacing / wave_speed`, stored
/// at construction. Bin `m` of an M-point DFT sits at
/// `ω_m = 2πm/(M·sample_period)`, so the delay matrix for that bin uses the
/// node `e^{-jω_m·tau}`.
#[derive(Clone, Copy, Debug)]
pub struct ArrayConfig {
    pub n_antennas: usize,
    pub spacing: f64,
    pub wave_speed: f64,
    pub tau: f64,
    pub dft_size: usize,
    pub sample_period: f64,
}

impl ArrayConfig {
    pub fn new(
        n_antennas: usize,
        spacing: f64,
        wave_speed: f64,
        dft_size: usize,
        sample_period: f64,
    ) -> Result<ArrayConfig, DvmError> {
        if n_antennas < 2 || !n_antennas.is_power_of_two() {
            return Err(DvmError::NotPowerOfTwo(n_antennas));
        }
        if dft_size < 2 || !dft_size.is_power_of_two() {
            return Err(DvmError::NotPowerOfTwo(dft_size));
        }
        for (value, what) in [
            (spacing, "spacing"),
            (wave_speed, "wave speed"),
            (sample_period, "sample period"),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(DvmError::InvalidConfig(format!(
                    "{what} must be finite and positive"
                )));
            }
        }
        Ok(ArrayConfig {
            n_antennas,
            spacing,
            wave_speed,
            tau: spacing / wave_speed,
            dft_size,
            sample_period,
        })
    }

    /// Angular frequency of DFT bin `m`.
    pub fn omega(&self, m: usize) -> f64 {
        std::f64::consts::TAU * m as f64 / (self.dft_size as f64 * self.sample_period)
    }

    /// Delay-matrix node for DFT bin `m`.
    pub fn bin_node(&self, m: usize) -> Node {
        Node::from_angle(self.omega(m) * self.tau)
    }
}

impl Default for ArrayConfig {
    /// Sixteen antennas 5 mm apart at the speed of light, eight bins at a
    /// nanosecond sample period.
    fn default() -> ArrayConfig {
        ArrayConfig::new(16, 0.005, 3.0e8, 8, 1.0e-9).unwrap()
    }
}

/// Where a synthesized source sits: on the exact steering profile of a beam
/// (index in `1..=n_antennas`), or at a physical direction `ψ` in radians,
/// which implies the inter-element delay `tau·sin ψ`.
#[derive(Clone, Copy, Debug)]
pub enum SourcePosition {
    Beam(usize),
    Direction(f64),
}

/// One narrowband source injected into a synthesized frame.
#[derive(Clone, Copy, Debug)]
pub struct SourceSpec {
    pub position: SourcePosition,
    pub amplitude: Complex<f64>,
    pub temporal_bin: usize,
}

/// Per-antenna spectra: entry `(l, m)` is antenna `l` at bin `m`, stored
/// antenna-major.
#[derive(Clone, Debug)]
pub struct SpectralFrame {
    pub data: Vec<Complex<f64>>,
    pub n_antennas: usize,
    pub dft_size: usize,
    pub frame_index: u64,
}

impl SpectralFrame {
    pub fn zeroed(config: &ArrayConfig) -> SpectralFrame {
        SpectralFrame {
            data: vec![Complex::new(0.0, 0.0); config.n_antennas * config.dft_size],
            n_antennas: config.n_antennas,
            dft_size: config.dft_size,
            frame_index: 0,
        }
    }

    #[inline]
    pub fn entry(&self, antenna: usize, bin: usize) -> Complex<f64> {
        self.data[antenna * self.dft_size + bin]
    }

    fn column(&self, bin: usize) -> Vec<Complex<f64>> {
        (0..self.n_antennas).map(|l| self.entry(l, bin)).collect()
    }
}

/// Formed beams: entry `(k, m)` is beam `k+1` (the matrix row of delay
/// `(k+1)·tau`) at bin `m`, stored beam-major. `degenerate_bins[m]` records
/// whether bin `m`'s node was degenerate for this array size (bin 0 always
/// is: its node is exactly 1).
#[derive(Clone, Debug)]
pub struct BeamFrame {
    pub data: Vec<Complex<f64>>,
    pub n_beams: usize,
    pub dft_size: usize,
    pub degenerate_bins: Vec<bool>,
}

impl BeamFrame {
    #[inline]
    pub fn entry(&self, beam: usize, bin: usize) -> Complex<f64> {
        self.data[beam * self.dft_size + bin]
    }
}

fn effective_delay(config: &ArrayConfig, position: SourcePosition) -> Result<f64, DvmError> {
    match position {
        SourcePosition::Beam(k) => {
            if k < 1 || k > config.n_antennas {
                return Err(DvmError::InvalidConfig(format!(
                    "beam index {k} is outside 1..={}",
                    config.n_antennas
                )));
            }
            Ok(k as f64 * config.tau)
        }
        SourcePosition::Direction(psi) => {
            if !psi.is_finite() {
                return Err(DvmError::InvalidConfig(
                    "source direction must be finite".into(),
                ));
            }
            Ok(psi.sin() * config.tau)
        }
    }
}

/// Builds the per-antenna spectra seen from the given sources.
///
/// A source at delay `d` and bin `m` adds `amplitude·e^{+jω_m·d·l}` to
/// antenna `l` at that bin, the phase profile that the matching beam
/// compensates exactly. Noise is circularly symmetric with RMS
/// `noise_level` per entry, drawn from the seeded generator in a fixed
/// order, so equal arguments give equal frames.
pub fn synthesize(
    config: &ArrayConfig,
    sources: &[SourceSpec],
    noise_level: f64,
    seed: u64,
) -> Result<SpectralFrame, DvmError> {
    if !noise_level.is_finite() || noise_level < 0.0 {
        return Err(DvmError::InvalidConfig(
            "noise level must be finite and nonnegative".into(),
        ));
    }
    let mut frame = SpectralFrame::zeroed(config);
    for source in sources {
        if source.temporal_bin >= config.dft_size {
            return Err(DvmError::InvalidConfig(format!(
                "temporal bin {} is outside 0..{}",
                source.temporal_bin, config.dft_size
            )));
        }
        let delay = effective_delay(config, source.position)?;
        let m = source.temporal_bin;
        let phase_step = config.omega(m) * delay;
        for l in 0..config.n_antennas {
            let rot = Complex::from_polar(1.0, phase_step * l as f64);
            frame.data[l * config.dft_size + m] += source.amplitude * rot;
        }
    }
    if noise_level > 0.0 {
        let sigma = noise_level / std::f64::consts::SQRT_2;
        let normal = Normal::new(0.0, sigma).expect("finite standard deviation");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in frame.data.iter_mut() {
            *v += Complex::new(normal.sample(&mut rng), normal.sample(&mut rng));
        }
    }
    Ok(frame)
}

/// Bins per-antenna time series: row `l` of `time_samples` (length
/// `dft_size`, antenna-major like a frame) is replaced by its M-point DFT,
/// computed as the fast scaled multiply at the node `e^{-2πi/M}`.
pub fn temporal_dft(
    time_samples: &[Complex<f64>],
    config: &ArrayConfig,
) -> Result<SpectralFrame, DvmError> {
    let expected = config.n_antennas * config.dft_size;
    if time_samples.len() != expected {
        return Err(DvmError::SizeMismatch {
            expected,
            got: time_samples.len(),
        });
    }
    let m = config.dft_size;
    let node = Node::from_angle(std::f64::consts::TAU / m as f64);
    let plan = build_plan::<f64>(m, node)?;
    let mut frame = SpectralFrame::zeroed(config);
    for l in 0..config.n_antennas {
        let row = &time_samples[l * m..(l + 1) * m];
        let spectrum = sdvm_multiply(&plan, row)?;
        frame.data[l * m..(l + 1) * m].copy_from_slice(&spectrum);
    }
    Ok(frame)
}

fn quantize(x: f64) -> i128 {
    (x / 1e-15).round() as i128
}

/// Reusable store of factorization plans keyed by size and node value
/// (quantized at 1e-15), so the M bin plans of a stream are built once.
#[derive(Default)]
pub struct PlanCache {
    plans: HashMap<(usize, i128, i128), Arc<FactorizationPlan<f64>>>,
}

impl PlanCache {
    pub fn new() -> PlanCache {
        PlanCache::default()
    }

    pub fn len(&self) -> usize {
        self.plans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plans.is_empty()
    }

    /// Fetches the plan for `(n, node)`, building and storing it on first
    /// use.
    pub fn plan(
        &mut self,
        n: usize,
        node: Node,
    ) -> Result<Arc<FactorizationPlan<f64>>, DvmError> {
        let value = node.value();
        let key = (n, quantize(value.re), quantize(value.im));
        if let Some(plan) = self.plans.get(&key) {
            return Ok(plan.clone());
        }
        let plan = Arc::new(build_plan::<f64>(n, node)?);
        self.plans.insert(key, plan.clone());
        Ok(plan)
    }
}

enum BinWork {
    Silent,
    Direct(Node),
    Fast(Arc<FactorizationPlan<f64>>),
}

fn thread_cap() -> Option<usize> {
    std::env::var("DVM_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k >= 1)
}

fn beamform_threads(
    frame: &SpectralFrame,
    config: &ArrayConfig,
    cache: &mut PlanCache,
    workers: usize,
) -> Result<BeamFrame, DvmError> {
    if frame.n_antennas != config.n_antennas || frame.dft_size != config.dft_size {
        return Err(DvmError::InvalidConfig(
            "frame dimensions disagree with the array configuration".into(),
        ));
    }
    let expected = config.n_antennas * config.dft_size;
    if frame.data.len() != expected {
        return Err(DvmError::SizeMismatch {
            expected,
            got: frame.data.len(),
        });
    }

    let n = config.n_antennas;
    let bins = config.dft_size;
    let zero = Complex::new(0.0, 0.0);

    let mut degenerate_bins = Vec::with_capacity(bins);
    let mut tasks = Vec::with_capacity(bins);
    for m in 0..bins {
        let node = config.bin_node(m);
        degenerate_bins.push(node.is_degenerate(n));
        let column = frame.column(m);
        let work = if column.iter().all(|v| *v == zero) {
            BinWork::Silent
        } else if m == 0 {
            // The DC node is exactly 1; the factored path has nothing to
            // offer there, so the column goes through the direct multiply.
            BinWork::Direct(node)
        } else {
            BinWork::Fast(cache.plan(n, node)?)
        };
        tasks.push((column, work));
    }

    let compute = |task: &(Vec<Complex<f64>>, BinWork)| -> Vec<Complex<f64>> {
        let (column, work) = task;
        match work {
            BinWork::Silent => vec![zero; n],
            BinWork::Direct(node) => direct_multiply(n, *node, column, false)
                .expect("column length was validated against the config"),
            BinWork::Fast(plan) => dvm_multiply(plan, column)
                .expect("column length was validated against the config"),
        }
    };

    let workers = workers.clamp(1, bins);
    let columns: Vec<Vec<Complex<f64>>> = if workers == 1 {
        tasks.iter().map(compute).collect()
    } else {
        let chunk_size = tasks.len().div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = tasks
                .chunks(chunk_size)
                .map(|chunk| scope.spawn(move || chunk.iter().map(compute).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("beam worker panicked"))
                .collect()
        })
    };

    let mut data = vec![zero; n * bins];
    for (m, column) in columns.iter().enumerate() {
        for (k, v) in column.iter().enumerate() {
            data[k * bins + m] = *v;
        }
    }
    Ok(BeamFrame {
        data,
        n_beams: n,
        dft_size: bins,
        degenerate_bins,
    })
}

/// Forms all beams of a frame with a caller-owned plan cache; see
/// [`beamform`].
pub fn beamform_with(
    frame: &SpectralFrame,
    config: &ArrayConfig,
    cache: &mut PlanCache,
) -> Result<BeamFrame, DvmError> {
    let workers = thread_cap()
        .or_else(|| std::thread::available_parallelism().ok().map(|p| p.get()))
        .unwrap_or(1);
    beamform_threads(frame, config, cache, workers)
}

/// Forms the `n_antennas` beams of every bin: beam column `m` is the delay
/// matrix at the bin's node applied to antenna column `m`.
///
/// Silent columns are passed through as zeros, bin 0 goes through the
/// direct multiply, and every other bin uses a factorization plan (built
/// once per distinct node). Bins are independent, so columns may be
/// computed on up to `DVM_THREADS` worker threads; results are assembled
/// in bin order and do not depend on the thread count.
pub fn beamform(frame: &SpectralFrame, config: &ArrayConfig) -> Result<BeamFrame, DvmError> {
    let mut cache = PlanCache::new();
    beamform_with(frame, config, &mut cache)
}

/// Squared magnitudes of a beam frame, in the same beam-major layout.
pub fn beam_powers(beams: &BeamFrame) -> Vec<f64> {
    beams.data.iter().map(|v| v.norm_sqr()).collect()
}
