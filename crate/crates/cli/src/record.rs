//! Machine-readable analysis records.
//!
//! Floats are written with 17 significant digits so that every reported
//! value parses back to the identical `f64`.

use serde::{Deserialize, Serialize, Serializer};

use fermisep::{SeparabilityReport, Spectrum};

/// Where an analyzed state came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDescriptor {
    File {
        path: String,
        #[serde(serialize_with = "sig17")]
        input_norm: f64,
    },
    Generator {
        d: usize,
        n: usize,
        seed: u64,
        slater: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub purity: bool,
    pub entropy: bool,
    pub idempotency: bool,
    pub separable: bool,
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    #[serde(serialize_with = "sig17")]
    pub load_ms: f64,
    #[serde(serialize_with = "sig17")]
    pub rdm_ms: f64,
    #[serde(serialize_with = "sig17")]
    pub spectrum_ms: f64,
    #[serde(serialize_with = "sig17")]
    pub report_ms: f64,
    #[serde(serialize_with = "sig17")]
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub input: InputDescriptor,
    pub d: usize,
    pub n: usize,
    #[serde(serialize_with = "sig17")]
    pub purity: f64,
    #[serde(serialize_with = "sig17")]
    pub entropy_nats: f64,
    #[serde(serialize_with = "sig17")]
    pub e_l: f64,
    #[serde(serialize_with = "sig17")]
    pub e_vn: f64,
    #[serde(serialize_with = "sig17")]
    pub idempotency_defect: f64,
    #[serde(serialize_with = "sig17")]
    pub tolerance: f64,
    pub verdicts: Verdicts,
    #[serde(serialize_with = "sig17_seq")]
    pub spectrum: Vec<f64>,
    pub timings: Timings,
}

impl AnalysisRecord {
    pub fn new(
        input: InputDescriptor,
        d: usize,
        n: usize,
        report: &SeparabilityReport,
        spectrum: &Spectrum,
        timings: Timings,
    ) -> Self {
        Self {
            input,
            d,
            n,
            purity: report.purity,
            entropy_nats: report.entropy,
            e_l: report.e_l,
            e_vn: report.e_vn,
            idempotency_defect: report.idempotency_defect,
            tolerance: report.tolerance,
            verdicts: Verdicts {
                purity: report.verdict_purity,
                entropy: report.verdict_entropy,
                idempotency: report.verdict_idempotency,
                separable: report.separable(),
            },
            spectrum: spectrum.eigenvalues().to_vec(),
            timings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Header and one data row.
    pub fn to_csv(&self) -> String {
        let input = match &self.input {
            InputDescriptor::File { path, .. } => path.clone(),
            InputDescriptor::Generator { d, n, seed, slater } => {
                format!(
                    "{}(d={d},n={n},seed={seed})",
                    if *slater { "slater" } else { "random" }
                )
            }
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "input",
            "d",
            "n",
            "purity",
            "entropy_nats",
            "e_l",
            "e_vn",
            "idempotency_defect",
            "verdict_purity",
            "verdict_entropy",
            "verdict_idempotency",
            "separable",
            "tolerance",
            "total_ms",
        ])
        .and_then(|_| {
            w.write_record([
                input,
                self.d.to_string(),
                self.n.to_string(),
                fmt17(self.purity),
                fmt17(self.entropy_nats),
                fmt17(self.e_l),
                fmt17(self.e_vn),
                fmt17(self.idempotency_defect),
                self.verdicts.purity.to_string(),
                self.verdicts.entropy.to_string(),
                self.verdicts.idempotency.to_string(),
                self.verdicts.separable.to_string(),
                fmt17(self.tolerance),
                fmt17(self.timings.total_ms),
            ])
        })
        .expect("in-memory csv write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Human-readable summary. `bits` converts entropies for display only.
    pub fn to_text(&self, bits: bool) -> String {
        let (scale, unit) = if bits {
            (std::f64::consts::LOG2_E, "bits")
        } else {
            (1.0, "nats")
        };
        let verdict = |b: bool| if b { "separable" } else { "entangled" };
        let mut out = String::new();
        out.push_str(&format!("d = {}, n = {}\n", self.d, self.n));
        out.push_str(&format!("purity              {}\n", fmt17(self.purity)));
        out.push_str(&format!(
            "entropy ({unit:4})      {}\n",
            fmt17(self.entropy_nats * scale)
        ));
        out.push_str(&format!("E_L                 {}\n", fmt17(self.e_l)));
        out.push_str(&format!(
            "E_VN ({unit:4})         {}\n",
            fmt17(self.e_vn * scale)
        ));
        out.push_str(&format!(
            "idempotency defect  {}\n",
            fmt17(self.idempotency_defect)
        ));
        out.push_str(&format!(
            "verdicts            purity: {}, entropy: {}, idempotency: {}\n",
            verdict(self.verdicts.purity),
            verdict(self.verdicts.entropy),
            verdict(self.verdicts.idempotency)
        ));
        out.push_str(&format!(
            "verdict             {}\n",
            verdict(self.verdicts.separable)
        ));
        out.push_str("spectrum           ");
        for l in &self.spectrum {
            out.push(' ');
            out.push_str(&fmt17(*l));
        }
        out.push('\n');
        out
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn sig17<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return Err(serde::ser::Error::custom(format!("non-finite value {x}")));
    }
    let raw =
        serde_json::value::RawValue::from_string(fmt17(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

fn sig17_seq<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Sig(f64);
    impl Serialize for Sig {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            sig17(&self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for &x in xs {
        seq.serialize_element(&Sig(x))?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fermisep::{analyze_detailed, FermionState, DEFAULT_TOLERANCE};

    fn sample_record() -> AnalysisRecord {
        let st = FermionState::random_state(6, 3, 1).unwrap();
        let a = analyze_detailed(&st, DEFAULT_TOLERANCE).unwrap();
        AnalysisRecord::new(
            InputDescriptor::Generator {
                d: 6,
                n: 3,
                seed: 1,
                slater: false,
            },
            6,
            3,
            &a.report,
            &a.spectrum,
            Timings {
                load_ms: 0.1,
                rdm_ms: 0.2,
                spectrum_ms: 1.0 / 3.0,
                report_ms: 0.0,
                total_ms: 0.7,
            },
        )
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let rec = sample_record();
        let text = rec.to_json();
        let back: AnalysisRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rec);
        let file = InputDescriptor::File {
            path: "x.json".into(),
            input_norm: 2.0f64.sqrt(),
        };
        let back: InputDescriptor =
            serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.25), "2.5000000000000000e-1");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
        let text = sample_record().to_json();
        assert!(
            text.contains("\"spectrum_ms\": 3.3333333333333331e-1"),
            "{text}"
        );
    }

    #[test]
    fn csv_has_header_and_row() {
        let csv = sample_record().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("input,d,n,purity"));
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        let row = reader.records().next().unwrap().unwrap();
        assert_eq!(&row[0], "random(d=6,n=3,seed=1)");
        assert_eq!(&row[1], "6");
        assert_eq!(row[3].parse::<f64>().unwrap(), sample_record().purity);
    }

    #[test]
    fn text_in_bits() {
        let rec = sample_record();
        let nats = rec.to_text(false);
        let bits = rec.to_text(true);
        assert!(nats.contains("entropy (nats)"));
        assert!(bits.contains("entropy (bits)"));
        assert!(bits.contains(&fmt17(rec.entropy_nats * std::f64::consts::LOG2_E)));
    }
}
