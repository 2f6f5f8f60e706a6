//! Channel models and the conditional log-probability vectors fed to the decoder.
//!
//! All logarithms are natural. Zero-probability transitions are `-inf`.

mod config;

pub use config::{ChannelConfig, ChannelSpec};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::codes::{tuple_count, tuple_indices, Symbol};
use crate::error::{Error, Result};

/// Row-sum tolerance for transition tables.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A memoryless channel with input alphabet `0..input_alphabet()`.
pub trait Channel: Send + Sync {
    type Output: Copy + Send + Sync + PartialEq + fmt::Debug;

    fn input_alphabet(&self) -> usize;

    /// `ln P(output | input)`; errors when `output` is not a valid channel output.
    fn log_likelihood(&self, input: usize, output: Self::Output) -> Result<f64>;

    fn sample<R: Rng + ?Sized>(&self, input: usize, rng: &mut R) -> Self::Output;

    /// Parses one token of an observation line.
    fn parse_output(&self, token: &str) -> Result<Self::Output>;

    fn format_output(&self, output: Self::Output) -> String;
}

/// Discrete memoryless channel given by its transition table.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteChannel {
    inputs: usize,
    outputs: usize,
    log_table: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteChannel {
    /// `rows[x][y] = P(y | x)`.
    pub fn from_probabilities(rows: &[Vec<f64>]) -> Result<Self> {
        let inputs = rows.len();
        let outputs = rows.first().map_or(0, |r| r.len());
        if inputs < 2 || outputs < 1 {
            return Err(Error::InvalidChannel(
                "transition table needs at least 2 inputs and 1 output".into(),
            ));
        }
        let mut log_table = Vec::with_capacity(inputs * outputs);
        let mut cumulative = Vec::with_capacity(inputs * outputs);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != outputs {
                return Err(Error::InvalidChannel(format!("row {x} has {} entries, expected {outputs}", row.len())));
            }
            if let Some(p) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidChannel(format!("row {x} has probability {p}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(Error::InvalidChannel(format!("row {x} sums to {sum}")));
            }
            let mut acc = 0.0;
            for &p in row {
                log_table.push(p.ln());
                acc += p;
                cumulative.push(acc);
            }
        }
        Ok(Self {
            inputs,
            outputs,
            log_table,
            cumulative,
        })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::qsc(2, p)
    }

    /// `q`-ary symmetric channel: correct with probability `1 - p`, otherwise
    /// uniform over the other `q - 1` symbols.
    pub fn qsc(q: usize, p: f64) -> Result<Self> {
        if q < 2 || !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("qsc needs q >= 2 and 0 <= p <= 1 (q={q}, p={p})")));
        }
        let rows: Vec<Vec<f64>> = (0..q)
            .map(|x| (0..q).map(|y| if x == y { 1.0 - p } else { p / (q - 1) as f64 }).collect())
            .collect();
        Self::from_probabilities(&rows)
    }

    pub fn noiseless(q: usize) -> Result<Self> {
        Self::qsc(q, 0.0)
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn log_row(&self, input: usize) -> &[f64] {
        &self.log_table[input * self.outputs..(input + 1) * self.outputs]
    }

    pub fn probability(&self, input: usize, output: usize) -> f64 {
        self.log_row(input)[output].exp()
    }
}

impl Channel for DiscreteChannel {
    type Output = usize;

    fn input_alphabet(&self) -> usize {
        self.inputs
    }

    #[inline]
    fn log_likelihood(&self, input: usize, output: usize) -> Result<f64> {
        if output >= self.outputs {
            return Err(Error::ObservationOutOfAlphabet {
                observation: output.to_string(),
            });
        }
        Ok(self.log_table[input * self.outputs + output])
    }

    fn sample<R: Rng + ?Sized>(&self, input: usize, rng: &mut R) -> usize {
        let row = &self.cumulative[input * self.outputs..(input + 1) * self.outputs];
        let u: f64 = rng.random();
        // Skip zero-probability outputs so a draw never lands on one.
        row.iter()
            .enumerate()
            .position(|(y, &c)| u < c && self.log_row(input)[y] > f64::NEG_INFINITY)
            .unwrap_or_else(|| {
                (0..self.outputs)
                    .rev()
                    .find(|&y| self.log_row(input)[y] > f64::NEG_INFINITY)
                    .expect("row sums to one")
            })
    }

    /// Binary output alphabets read `0`/`1`; larger ones read `1..=outputs`.
    fn parse_output(&self, token: &str) -> Result<usize> {
        let bad = || Error::ObservationOutOfAlphabet {
            observation: token.to_string(),
        };
        let v: usize = token.parse().map_err(|_| bad())?;
        if self.outputs == 2 {
            if v < 2 {
                Ok(v)
            } else {
                Err(bad())
            }
        } else if (1..=self.outputs).contains(&v) {
            Ok(v - 1)
        } else {
            Err(bad())
        }
    }

    fn format_output(&self, output: usize) -> String {
        if self.outputs == 2 {
            output.to_string()
        } else {
            (output + 1).to_string()
        }
    }
}

/// Additive white Gaussian noise on a real constellation.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianChannel {
    constellation: Vec<f64>,
    sigma: f64,
    log_norm: f64,
}

impl GaussianChannel {
    /// `constellation[x]` is the real amplitude sent for input `x`.
    pub fn new(constellation: Vec<f64>, sigma: f64) -> Result<Self> {
        if constellation.len() < 2 {
            return Err(Error::InvalidChannel("constellation needs at least 2 points".into()));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidChannel(format!("sigma must be positive, got {sigma}")));
        }
        if constellation.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidChannel("constellation points must be finite".into()));
        }
        Ok(Self {
            constellation,
            sigma,
            log_norm: -(sigma * (2.0 * std::f64::consts::PI).sqrt()).ln(),
        })
    }

    /// Binary antipodal signalling: input 0 sends `+1`, input 1 sends `-1`.
    pub fn antipodal(sigma: f64) -> Result<Self> {
        Self::new(vec![1.0, -1.0], sigma)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn constellation(&self) -> &[f64] {
        &self.constellation
    }
}

impl Channel for GaussianChannel {
    type Output = f64;

    fn input_alphabet(&self) -> usize {
        self.constellation.len()
    }

    #[inline]
    fn log_likelihood(&self, input: usize, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::ObservationOutOfAlphabet {
                observation: y.to_string(),
            });
        }
        let d = y - self.constellation[input];
        Ok(self.log_norm - d * d / (2.0 * self.sigma * self.sigma))
    }

    fn sample<R: Rng + ?Sized>(&self, input: usize, rng: &mut R) -> f64 {
        let noise = Normal::new(0.0, self.sigma).expect("sigma validated");
        self.constellation[input] + noise.sample(rng)
    }

    fn parse_output(&self, token: &str) -> Result<f64> {
        token
            .parse::<f64>()
            .ok()
            .filter(|y| y.is_finite())
            .ok_or_else(|| Error::ObservationOutOfAlphabet {
                observation: token.to_string(),
            })
    }

    fn format_output(&self, y: f64) -> String {
        format!("{y}")
    }
}

/// One received symbol of a binary erasure channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErasureSymbol {
    Zero,
    One,
    Erased,
}

impl ErasureSymbol {
    pub fn from_bit(bit: Symbol) -> Self {
        if bit == 0 {
            Self::Zero
        } else {
            Self::One
        }
    }
}

impl fmt::Display for ErasureSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Zero => "0",
            Self::One => "1",
            Self::Erased => "e",
        })
    }
}

/// A received word over `{0, 1, e}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasureObservation(pub Vec<ErasureSymbol>);

impl ErasureObservation {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn erasures(&self) -> usize {
        self.0.iter().filter(|s| **s == ErasureSymbol::Erased).count()
    }
}

/// Binary erasure channel with erasure probability `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErasureChannel {
    p: f64,
}

impl ErasureChannel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("erasure probability {p} outside [0, 1]")));
        }
        Ok(Self { p })
    }

    pub fn erasure_probability(&self) -> f64 {
        self.p
    }
}

impl Channel for ErasureChannel {
    type Output = ErasureSymbol;

    fn input_alphabet(&self) -> usize {
        2
    }

    fn log_likelihood(&self, input: usize, output: ErasureSymbol) -> Result<f64> {
        Ok(match (input, output) {
            (_, ErasureSymbol::Erased) => self.p.ln(),
            (0, ErasureSymbol::Zero) | (1, ErasureSymbol::One) => (1.0 - self.p).ln(),
            _ => f64::NEG_INFINITY,
        })
    }

    fn sample<R: Rng + ?Sized>(&self, input: usize, rng: &mut R) -> ErasureSymbol {
        if rng.random::<f64>() < self.p {
            ErasureSymbol::Erased
        } else {
            ErasureSymbol::from_bit(input as Symbol)
        }
    }

    fn parse_output(&self, token: &str) -> Result<ErasureSymbol> {
        match token {
            "0" => Ok(ErasureSymbol::Zero),
            "1" => Ok(ErasureSymbol::One),
            "e" | "E" => Ok(ErasureSymbol::Erased),
            _ => Err(Error::ObservationOutOfAlphabet {
                observation: token.to_string(),
            }),
        }
    }

    fn format_output(&self, output: ErasureSymbol) -> String {
        output.to_string()
    }
}

/// `V(y)`: block `i` holds `ln P(y_i | x)` for every input `x`.
pub fn conditional_probability_vector<C: Channel>(channel: &C, y: &[C::Output]) -> Result<Vec<f64>> {
    let q = channel.input_alphabet();
    let mut v = Vec::with_capacity(y.len() * q);
    for &yi in y {
        for x in 0..q {
            v.push(channel.log_likelihood(x, yi)?);
        }
    }
    Ok(v)
}

/// Erasure observation as `{-1, 0, +1}`: `0 -> -1`, `1 -> +1`, erased `-> 0`.
pub fn bipolar_received_vector(y: &ErasureObservation) -> Vec<f64> {
    y.0.iter()
        .map(|s| match s {
            ErasureSymbol::Zero => -1.0,
            ErasureSymbol::One => 1.0,
            ErasureSymbol::Erased => 0.0,
        })
        .collect()
}

/// Binary codeword as `{-1, +1}`: `0 -> -1`, `1 -> +1`.
pub fn bipolar_codeword_vector(c: &[Symbol]) -> Vec<f64> {
    c.iter()
        .map(|&b| {
            assert!(b < 2, "bipolar encoding needs a binary codeword");
            if b == 1 {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

/// Channel with `L` taps of memory: the output at position `i` depends on the
/// tuple `(x_i, .., x_{i-L})`, modelled as a memoryless channel over tuple
/// indices (see [`crate::codes::tuple_indices`]).
#[derive(Clone, Debug, PartialEq)]
pub struct IsiChannel<C> {
    q: usize,
    memory: usize,
    initial_symbol: Symbol,
    tuple_channel: C,
}

impl<C: Channel> IsiChannel<C> {
    pub fn new(q: usize, memory: usize, initial_symbol: Symbol, tuple_channel: C) -> Result<Self> {
        let tuples = tuple_count(q, memory)?;
        if tuple_channel.input_alphabet() != tuples {
            return Err(Error::InvalidChannel(format!(
                "ISI channel with q={q}, L={memory} needs {tuples} tuple inputs, got {}",
                tuple_channel.input_alphabet()
            )));
        }
        if initial_symbol as usize >= q {
            return Err(Error::SymbolOutOfRange {
                symbol: initial_symbol as usize,
                q,
            });
        }
        Ok(Self {
            q,
            memory,
            initial_symbol,
            tuple_channel,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn initial_symbol(&self) -> Symbol {
        self.initial_symbol
    }

    pub fn tuple_channel(&self) -> &C {
        &self.tuple_channel
    }

    /// `ln P(y | x_i, x_{i-1}, .., x_{i-L})` for an explicit tuple, current symbol first.
    pub fn log_likelihood_tuple(&self, tuple: &[Symbol], y: C::Output) -> Result<f64> {
        if tuple.len() != self.memory + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.memory + 1,
                found: tuple.len(),
            });
        }
        let index = tuple.iter().fold(0usize, |acc, &s| acc * self.q + s as usize);
        self.tuple_channel.log_likelihood(index, y)
    }
}

impl IsiChannel<GaussianChannel> {
    /// Linear ISI: the noiseless output is `sum_l taps[l] * constellation[x_{i-l}]`,
    /// plus Gaussian noise. `taps.len() = L + 1`.
    pub fn linear_gaussian(
        constellation: &[f64],
        taps: &[f64],
        sigma: f64,
        initial_symbol: Symbol,
    ) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidChannel("need at least one tap".into()));
        }
        let q = constellation.len();
        let memory = taps.len() - 1;
        let tuples = tuple_count(q, memory)?;
        let points = (0..tuples)
            .map(|t| {
                // Digits of t, most significant first, are x_i, x_{i-1}, ..
                (0..=memory)
                    .map(|lag| {
                        let digit = (t / q.pow((memory - lag) as u32)) % q;
                        taps[lag] * constellation[digit]
                    })
                    .sum()
            })
            .collect();
        Self::new(q, memory, initial_symbol, GaussianChannel::new(points, sigma)?)
    }
}

/// `V(y)` for an ISI channel: `n` blocks of `q^(L+1)` tuple log-likelihoods.
pub fn conditional_probability_vector_isi<C: Channel>(
    channel: &IsiChannel<C>,
    y: &[C::Output],
) -> Result<Vec<f64>> {
    conditional_probability_vector(&channel.tuple_channel, y)
}

/// Draws one output per position, independently given each input symbol.
pub fn sample_channel<C: Channel, R: Rng + ?Sized>(
    channel: &C,
    c: &[Symbol],
    rng: &mut R,
) -> Vec<C::Output> {
    c.iter().map(|&x| channel.sample(x as usize, rng)).collect()
}

/// [`sample_channel`] with a generator seeded from `seed`.
pub fn sample_channel_seeded<C: Channel>(channel: &C, c: &[Symbol], seed: u64) -> Vec<C::Output> {
    sample_channel(channel, c, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Draws one output per position given its input tuple.
pub fn sample_isi<C: Channel, R: Rng + ?Sized>(
    channel: &IsiChannel<C>,
    c: &[Symbol],
    rng: &mut R,
) -> Vec<C::Output> {
    tuple_indices(c, channel.q, channel.memory, channel.initial_symbol)
        .map(|t| channel.tuple_channel.sample(t, rng))
        .collect()
}
