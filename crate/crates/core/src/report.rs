//! Metrics reports. Field order is fixed by the struct layout, so the JSON
//! of a report is byte-identical across runs as long as wall time is left
//! out.

use serde::Serialize;

use crate::symbolic::ResourceMeter;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InstanceInfo {
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    pub pre: u64,
    pub post: u64,
    pub basic_set: u64,
    pub pick: u64,
    pub cardinality: u64,
}

impl From<&ResourceMeter> for OpCounts {
    fn from(m: &ResourceMeter) -> Self {
        OpCounts {
            pre: m.pre,
            post: m.post,
            basic_set: m.basic_set,
            pick: m.pick,
            cardinality: m.cardinality,
        }
    }
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.pre + self.post + self.basic_set + self.pick + self.cardinality
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub command: String,
    pub algo: String,
    pub instance: InstanceInfo,
    pub op_counts: OpCounts,
    pub total_ops: u64,
    pub peak_live_sets: u64,
    pub recursion_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl MetricsReport {
    pub fn new(command: &str, algo: &str, instance: InstanceInfo, meter: &ResourceMeter, depth: usize) -> Self {
        let op_counts = OpCounts::from(meter);
        MetricsReport {
            command: command.into(),
            algo: algo.into(),
            instance,
            total_ops: op_counts.total(),
            op_counts,
            peak_live_sets: meter.peak_live_sets,
            recursion_depth: depth,
            wall_time_ms: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_is_sum_of_categories() {
        let meter = ResourceMeter {
            pre: 3,
            post: 4,
            basic_set: 10,
            pick: 1,
            cardinality: 2,
            live_sets: 0,
            peak_live_sets: 7,
        };
        let r = MetricsReport::new("mec", "classical", InstanceInfo::default(), &meter, 2);
        assert_eq!(r.total_ops, 20);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"command":"mec","algo":"classical","instance":{"n":0,"m":0}"#));
        assert!(!json.contains("wall_time"));
    }
}
