//! Run configuration: TOML file, validated into [`RunConfig`].

use std::ops::Range;
use std::path::{Path, PathBuf};

use glt_core::experiment::{generating_coefficients, max_l, MatrixFamily};
use glt_core::{
    parse_coefficient_list, Domain, ExtractOptions, FourierTable, FunctionSpec, Normalization,
    ProductSymbol, SamplePoint,
};
use serde::Deserialize;
use toml::Spanned;

use crate::import::import_matrix;
use crate::ConfigError;

/// The pipelines a run can execute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Extract,
    Compare,
    Tables,
    Weyl,
    Qcurve,
    Counterexample,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Extract,
        Command::Compare,
        Command::Tables,
        Command::Weyl,
        Command::Qcurve,
        Command::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Extract => "extract",
            Command::Compare => "compare",
            Command::Tables => "tables",
            Command::Weyl => "weyl",
            Command::Qcurve => "qcurve",
            Command::Counterexample => "counterexample",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: MatrixFamily,
    /// Source text of `a` and `f` as given, for the manifest.
    pub a_text: Option<String>,
    pub f_text: Option<String>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub l: Vec<usize>,
    pub truth: Option<ProductSymbol>,
    pub output: PathBuf,
    pub commands: Vec<Command>,
    pub options: ExtractOptions,
    pub table1_n: usize,
    pub table1_l: usize,
    pub figure_n: usize,
    pub figure_l: usize,
    pub counterexample_n: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: Option<Spanned<String>>,
    a: Option<Spanned<String>>,
    f: Option<Spanned<String>>,
    f_coeffs: Option<Spanned<String>>,
    f_terms: Option<Spanned<usize>>,
    matrix: Option<Spanned<String>>,
    n: Option<Spanned<Vec<usize>>>,
    m: Option<Spanned<Vec<usize>>>,
    l: Option<Spanned<Vec<usize>>>,
    output: Option<Spanned<String>>,
    commands: Option<Spanned<Vec<String>>>,
    truth: Option<RawTruth>,
    extraction: Option<RawExtraction>,
    table1: Option<RawSized>,
    figure: Option<RawSized>,
    counterexample: Option<RawCounterexample>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTruth {
    a: Spanned<String>,
    g: Spanned<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtraction {
    normalization: Option<Spanned<String>>,
    sample: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSized {
    n: Option<Spanned<usize>>,
    l: Option<Spanned<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCounterexample {
    n: Option<Spanned<Vec<usize>>>,
}

const DEFAULT_N: [usize; 4] = [400, 1600, 3600, 6400];
const DEFAULT_M: [usize; 4] = [100, 400, 700, 1000];
const DEFAULT_L: [usize; 5] = [3, 5, 7, 10, 15];
const DEFAULT_COUNTEREXAMPLE_N: [usize; 3] = [10_000, 100_000, 1_000_000];
const DEFAULT_F_TERMS: usize = 32;
const DEFAULT_FIGURE_N: usize = 2500;
const DEFAULT_FIGURE_L: usize = 7;

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn invalid(&self, key: &str, span: Range<usize>, msg: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            key: key.to_string(),
            line: line_of(self.text, span.start),
            message: msg.into(),
        }
    }

    fn constraint(&self, key: &str, span: Range<usize>, msg: impl Into<String>) -> ConfigError {
        ConfigError::Constraint {
            key: key.to_string(),
            line: line_of(self.text, span.start),
            message: msg.into(),
        }
    }

    fn function(
        &self,
        key: &str,
        s: &Spanned<String>,
        domain: Domain,
    ) -> Result<FunctionSpec, ConfigError> {
        FunctionSpec::from_text(s.get_ref(), domain)
            .map_err(|e| self.invalid(key, s.span(), e.to_string()))
    }

    fn sizes(
        &self,
        key: &str,
        s: &Spanned<Vec<usize>>,
        min: usize,
    ) -> Result<Vec<usize>, ConfigError> {
        let v = s.get_ref();
        if v.is_empty() {
            return Err(self.constraint(key, s.span(), "list must not be empty"));
        }
        if let Some(bad) = v.iter().find(|&&x| x < min) {
            return Err(self.constraint(
                key,
                s.span(),
                format!("value {bad} is below the minimum {min}"),
            ));
        }
        Ok(v.clone())
    }
}

/// Reads and validates a configuration file. Relative paths inside it are
/// resolved against the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config(&text, base)
}

/// Validates configuration text; `base` resolves relative paths.
pub fn parse_config(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let cx = Ctx { text };
    let resolve = |p: &str| {
        let p = PathBuf::from(p);
        if p.is_absolute() {
            p
        } else {
            base.join(p)
        }
    };

    let family_name = raw
        .family
        .as_ref()
        .ok_or(ConfigError::Missing { key: "family" })?;
    let require = |v: &Option<Spanned<String>>, key: &'static str| {
        v.clone().ok_or(ConfigError::Missing { key })
    };

    let fhat = |cx: &Ctx| -> Result<(FourierTable, String), ConfigError> {
        match (&raw.f, &raw.f_coeffs) {
            (Some(_), Some(c)) => Err(cx.invalid(
                "f_coeffs",
                c.span(),
                "give either `f` or `f_coeffs`, not both",
            )),
            (None, None) => Err(ConfigError::Missing { key: "f" }),
            (None, Some(c)) => {
                let pairs = parse_coefficient_list(c.get_ref())
                    .map_err(|e| cx.invalid("f_coeffs", c.span(), e.to_string()))?;
                if pairs.is_empty() {
                    return Err(cx.invalid("f_coeffs", c.span(), "no coefficients"));
                }
                Ok((
                    FourierTable::from_pairs(&pairs, Domain::Torus),
                    c.get_ref().clone(),
                ))
            }
            (Some(f), None) => {
                let spec = cx.function("f", f, Domain::Torus)?;
                let terms = raw
                    .f_terms
                    .as_ref()
                    .map_or(DEFAULT_F_TERMS, |t| *t.get_ref());
                let table = generating_coefficients(&spec, terms)
                    .map_err(|e| cx.invalid("f", f.span(), e.to_string()))?;
                Ok((table, f.get_ref().clone()))
            }
        }
    };

    let (family, a_text, f_text) = match family_name.get_ref().as_str() {
        "toeplitz" => {
            let (fhat, f_text) = fhat(&cx)?;
            (MatrixFamily::Toeplitz { fhat }, None, Some(f_text))
        }
        "lt" => {
            let a = require(&raw.a, "a")?;
            let spec = cx.function("a", &a, Domain::UnitInterval)?;
            let (fhat, f_text) = fhat(&cx)?;
            (
                MatrixFamily::Lt { a: spec, fhat },
                Some(a.into_inner()),
                Some(f_text),
            )
        }
        "fd-diffusion" => {
            let a = require(&raw.a, "a")?;
            let spec = cx.function("a", &a, Domain::UnitInterval)?;
            (
                MatrixFamily::FdDiffusion { a: spec },
                Some(a.into_inner()),
                None,
            )
        }
        "import" => {
            let file = require(&raw.matrix, "matrix")?;
            let matrix = import_matrix(&resolve(file.get_ref()))
                .map_err(|e| cx.invalid("matrix", file.span(), e.to_string()))?;
            (MatrixFamily::Import { matrix }, None, None)
        }
        other => {
            return Err(cx.invalid(
                "family",
                family_name.span(),
                format!("unknown family `{other}` (expected toeplitz, lt, fd-diffusion or import)"),
            ))
        }
    };

    let fixed = family.fixed_size();
    let size_list = |key: &str,
                     given: &Option<Spanned<Vec<usize>>>,
                     default: &[usize]|
     -> Result<Vec<usize>, ConfigError> {
        match (given, fixed) {
            (Some(s), Some(order)) => {
                let v = cx.sizes(key, s, 1)?;
                if v.iter().any(|&x| x != order) {
                    return Err(cx.constraint(
                        key,
                        s.span(),
                        format!("imported matrix has order {order}"),
                    ));
                }
                Ok(v)
            }
            (Some(s), None) => cx.sizes(key, s, 4),
            (None, Some(order)) => Ok(vec![order]),
            (None, None) => Ok(default.to_vec()),
        }
    };
    let n = size_list("n", &raw.n, &DEFAULT_N)?;
    let m = size_list("m", &raw.m, &DEFAULT_M)?;
    let m_top = *m.iter().max().expect("non-empty");
    let l_cap = max_l(m_top).unwrap_or(0);
    let l = match &raw.l {
        Some(s) => {
            let v = s.get_ref().clone();
            if v.is_empty() {
                return Err(cx.constraint("l", s.span(), "list must not be empty"));
            }
            if let Some(bad) = v.iter().find(|&&x| x > l_cap) {
                return Err(cx.constraint(
                    "l",
                    s.span(),
                    format!(
                        "l = {bad} needs l < floor(sqrt(m)) = {} for the largest m = {m_top}",
                        l_cap + 1
                    ),
                ));
            }
            v
        }
        None => {
            let fit: Vec<usize> = DEFAULT_L.iter().copied().filter(|&x| x <= l_cap).collect();
            if fit.is_empty() {
                vec![l_cap]
            } else {
                fit
            }
        }
    };

    let truth = match &raw.truth {
        Some(t) => {
            let a = cx.function("truth.a", &t.a, Domain::UnitInterval)?;
            let g = cx.function("truth.g", &t.g, Domain::Torus)?;
            Some(
                ProductSymbol::new(a, g)
                    .map_err(|e| cx.invalid("truth", t.a.span(), e.to_string()))?,
            )
        }
        None => family.default_truth(),
    };

    let mut options = ExtractOptions::default();
    if let Some(e) = &raw.extraction {
        if let Some(s) = &e.normalization {
            options.normalization = match s.get_ref().as_str() {
                "projection" => Normalization::Projection,
                "trace" => Normalization::Trace,
                other => {
                    return Err(cx.invalid(
                        "extraction.normalization",
                        s.span(),
                        format!("unknown normalization `{other}` (expected projection or trace)"),
                    ))
                }
            };
        }
        if let Some(s) = &e.sample {
            options.sample = match s.get_ref().as_str() {
                "midpoint" => SamplePoint::Midpoint,
                "right" => SamplePoint::Right,
                other => {
                    return Err(cx.invalid(
                        "extraction.sample",
                        s.span(),
                        format!("unknown sample point `{other}` (expected midpoint or right)"),
                    ))
                }
            };
        }
    }

    let commands = match &raw.commands {
        Some(s) => {
            let mut out = Vec::new();
            for name in s.get_ref() {
                let c = Command::parse(name).ok_or_else(|| {
                    cx.invalid("commands", s.span(), format!("unknown command `{name}`"))
                })?;
                if !out.contains(&c) {
                    out.push(c);
                }
            }
            out
        }
        None => vec![Command::Tables],
    };

    let sized = |section: &Option<RawSized>,
                 key: &str,
                 default_n: usize,
                 default_l: usize|
     -> Result<(usize, usize), ConfigError> {
        let (mut sn, mut sl) = (default_n, default_l);
        if let Some(s) = section {
            if let Some(v) = &s.n {
                sn = *v.get_ref();
                let ok = fixed.map_or(sn >= 4, |order| sn == order);
                if !ok {
                    return Err(cx.constraint(
                        &format!("{key}.n"),
                        v.span(),
                        format!("n = {sn} is not admissible"),
                    ));
                }
            }
            if let Some(v) = &s.l {
                sl = *v.get_ref();
                if sl > l_cap {
                    return Err(cx.constraint(
                        &format!("{key}.l"),
                        v.span(),
                        format!("l = {sl} needs l < floor(sqrt(m)) = {}", l_cap + 1),
                    ));
                }
            }
        }
        Ok((sn, sl))
    };
    let l_min = *l.iter().min().expect("non-empty");
    let (table1_n, table1_l) = sized(&raw.table1, "table1", n[0], l_min)?;
    let figure_default_n = fixed.unwrap_or(DEFAULT_FIGURE_N);
    let (figure_n, figure_l) = sized(
        &raw.figure,
        "figure",
        figure_default_n,
        DEFAULT_FIGURE_L.min(l_cap),
    )?;

    let counterexample_n = match raw.counterexample.as_ref().and_then(|c| c.n.as_ref()) {
        Some(s) => cx.sizes("counterexample.n", s, 1)?,
        None => DEFAULT_COUNTEREXAMPLE_N.to_vec(),
    };

    Ok(RunConfig {
        family,
        a_text,
        f_text,
        n,
        m,
        l,
        truth,
        output: resolve(
            raw.output
                .as_ref()
                .map_or("glt-out", |o| o.get_ref().as_str()),
        ),
        commands,
        options,
        table1_n,
        table1_l,
        figure_n,
        figure_l,
        counterexample_n,
    })
}
