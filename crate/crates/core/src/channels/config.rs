use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DiscreteChannel, ErasureChannel, GaussianChannel, IsiChannel};
use crate::codes::tuple_count;
use crate::error::{Error, Result};

/// Channel description as read from a TOML file, tagged by `kind`.
///
/// ```toml
/// kind = "isi-dmc"
/// q = 2
/// L = 1
/// initial_symbol = 1
/// rows = [[0.9, 0.1], [0.6, 0.4], [0.3, 0.7], [0.1, 0.9]]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChannelConfig {
    Bsc {
        p: f64,
    },
    Qsc {
        q: usize,
        p: f64,
    },
    Dmc {
        rows: Vec<Vec<f64>>,
    },
    Noiseless {
        q: usize,
    },
    Awgn {
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constellation: Option<Vec<f64>>,
    },
    Erasure {
        p: f64,
    },
    IsiDmc {
        q: usize,
        #[serde(rename = "L")]
        memory: usize,
        /// 1-based; defaults to symbol 1.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial_symbol: Option<usize>,
        rows: Vec<Vec<f64>>,
    },
}

/// A constructed channel of any supported kind.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec {
    Discrete(DiscreteChannel),
    Gaussian(GaussianChannel),
    Erasure(ErasureChannel),
    IsiDiscrete(IsiChannel<DiscreteChannel>),
}

impl ChannelConfig {
    /// Parses the `kind:param[,param..]` shorthand: `bsc:0.1`, `qsc:3,0.1`,
    /// `noiseless:2`, `awgn:1.0` or `awgn:0.8,1,-1,3` (sigma then points),
    /// `erasure:0.2` / `bec:0.2`.
    pub fn parse_shorthand(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidChannel(format!("{s:?}: {msg}"));
        let (kind, params) = s.split_once(':').ok_or_else(|| bad("expected kind:params"))?;
        let nums: Vec<f64> = params
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("parameters must be numbers")))
            .collect::<Result<_>>()?;
        let as_q = |x: f64| -> Result<usize> {
            if x.fract() == 0.0 && x >= 2.0 {
                Ok(x as usize)
            } else {
                Err(bad("alphabet size must be an integer >= 2"))
            }
        };
        match (kind, nums.as_slice()) {
            ("bsc", [p]) => Ok(Self::Bsc { p: *p }),
            ("qsc", [q, p]) => Ok(Self::Qsc { q: as_q(*q)?, p: *p }),
            ("noiseless", [q]) => Ok(Self::Noiseless { q: as_q(*q)? }),
            ("awgn", [sigma]) => Ok(Self::Awgn {
                sigma: *sigma,
                constellation: None,
            }),
            ("awgn", [sigma, points @ ..]) => Ok(Self::Awgn {
                sigma: *sigma,
                constellation: Some(points.to_vec()),
            }),
            ("erasure" | "bec", [p]) => Ok(Self::Erasure { p: *p }),
            _ => Err(bad("unknown kind or wrong number of parameters")),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map_or(0, |sp| text[..sp.start].lines().count().max(1)),
            message: e.message().to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("channel config serializes")
    }

    /// Reads a TOML file when `arg` names an existing file, else parses shorthand.
    pub fn load(arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.is_file() {
            Self::from_toml(&std::fs::read_to_string(path)?)
        } else {
            Self::parse_shorthand(arg)
        }
    }

    pub fn build(&self) -> Result<ChannelSpec> {
        Ok(match self {
            Self::Bsc { p } => ChannelSpec::Discrete(DiscreteChannel::bsc(*p)?),
            Self::Qsc { q, p } => ChannelSpec::Discrete(DiscreteChannel::qsc(*q, *p)?),
            Self::Dmc { rows } => ChannelSpec::Discrete(DiscreteChannel::from_probabilities(rows)?),
            Self::Noiseless { q } => ChannelSpec::Discrete(DiscreteChannel::noiseless(*q)?),
            Self::Awgn {
                sigma,
                constellation,
            } => ChannelSpec::Gaussian(match constellation {
                Some(points) => GaussianChannel::new(points.clone(), *sigma)?,
                None => GaussianChannel::antipodal(*sigma)?,
            }),
            Self::Erasure { p } => ChannelSpec::Erasure(ErasureChannel::new(*p)?),
            Self::IsiDmc {
                q,
                memory,
                initial_symbol,
                rows,
            } => {
                let tuples = tuple_count(*q, *memory)?;
                if rows.len() != tuples {
                    return Err(Error::InvalidChannel(format!(
                        "isi-dmc with q={q}, L={memory} needs {tuples} rows, got {}",
                        rows.len()
                    )));
                }
                let initial = initial_symbol.unwrap_or(1);
                if initial == 0 || initial > *q {
                    return Err(Error::SymbolOutOfRange { symbol: initial, q: *q });
                }
                ChannelSpec::IsiDiscrete(IsiChannel::new(
                    *q,
                    *memory,
                    (initial - 1) as u16,
                    DiscreteChannel::from_probabilities(rows)?,
                )?)
            }
        })
    }
}

impl ChannelSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Discrete(_) => "discrete",
            Self::Gaussian(_) => "awgn",
            Self::Erasure(_) => "erasure",
            Self::IsiDiscrete(_) => "isi-dmc",
        }
    }
}
