//! The run record emitted by every command, as one JSON object or one
//! CSV row with identical field values.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Instance file path, or the generator spec for generated inputs.
    pub instance: String,
    pub command: String,
    pub status: String,
    pub achieved_red: Option<u64>,
    pub k: u64,
    /// Oracle optimum, present when the oracle ran.
    pub k_star: Option<u64>,
    pub branch: Option<String>,
    pub iterations: Option<u64>,
    /// Wall time; excluded from determinism comparisons.
    pub elapsed_ms: f64,
    pub seed: Option<u64>,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("run records serialize")
    }
}

/// CSV with the fixed header row for a sequence of records.
pub fn to_csv(records: &[RunRecord]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in records {
        writer.serialize(record).expect("run records serialize");
    }
    String::from_utf8(writer.into_inner().expect("csv writer flushes"))
        .expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunRecord {
        RunRecord {
            instance: "gen:mode=random-planted;n=4;density=0.3;red=0.5;seed=7".into(),
            command: "solve".into(),
            status: "solved".into(),
            achieved_red: Some(2),
            k: 3,
            k_star: None,
            branch: Some("cycle_loop".into()),
            iterations: Some(1),
            elapsed_ms: 0.25,
            seed: Some(7),
        }
    }

    #[test]
    fn json_round_trips() {
        let record = sample();
        let parsed: RunRecord = serde_json::from_str(&record.to_json()).unwrap();
        assert_eq!(parsed, record);
    }

    #[test]
    fn csv_round_trips() {
        let records = vec![sample()];
        let text = to_csv(&records);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let parsed: Vec<RunRecord> = reader.deserialize().collect::<Result<_, _>>().unwrap();
        assert_eq!(parsed, records);
        assert!(text.starts_with(
            "instance,command,status,achieved_red,k,k_star,branch,iterations,elapsed_ms,seed"
        ));
    }
}
