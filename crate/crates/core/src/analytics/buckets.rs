use std::fmt;

use chrono::{NaiveTime, Timelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Hour at which the first bucket opens.
pub const FIRST_HOUR: u32 = 6;
pub const BUCKET_HOURS: u32 = 2;
pub const BUCKET_COUNT: usize = 8;

const LABELS: [&str; BUCKET_COUNT] = [
    "6-8", "8-10", "10-12", "12-14", "14-16", "16-18", "18-20", "20-00",
];

pub const OUT_OF_RANGE: &str = "out_of_range";

/// One of the eight local-time windows between 06:00 and 23:59:59. Each is
/// two hours wide except the last, which runs from 20:00 to midnight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeBucket(u8);

impl TimeBucket {
    pub fn all() -> impl Iterator<Item = TimeBucket> {
        (0..BUCKET_COUNT as u8).map(TimeBucket)
    }

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < BUCKET_COUNT).then_some(TimeBucket(i as u8))
    }

    pub fn label(&self) -> &'static str {
        LABELS[self.index()]
    }

    pub fn from_label(label: &str) -> Option<Self> {
        LABELS
            .iter()
            .position(|l| *l == label)
            .map(|i| TimeBucket(i as u8))
    }

    pub fn start(&self) -> NaiveTime {
        NaiveTime::from_hms_opt(FIRST_HOUR + BUCKET_HOURS * self.0 as u32, 0, 0).expect("valid")
    }

    /// Inclusive upper bound for the last bucket, exclusive otherwise.
    pub fn end(&self) -> NaiveTime {
        if self.index() == BUCKET_COUNT - 1 {
            NaiveTime::from_hms_opt(23, 59, 59).expect("valid")
        } else {
            NaiveTime::from_hms_opt(FIRST_HOUR + BUCKET_HOURS * (self.0 as u32 + 1), 0, 0)
                .expect("valid")
        }
    }
}

impl fmt::Display for TimeBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for TimeBucket {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for TimeBucket {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TimeBucket::from_label(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown time bucket '{s}'")))
    }
}

/// Bucket of a local clock time; `None` before 06:00.
pub fn bucket_of(time: NaiveTime) -> Option<TimeBucket> {
    let hour = time.hour();
    if hour < FIRST_HOUR {
        return None;
    }
    let i = ((hour - FIRST_HOUR) / BUCKET_HOURS) as usize;
    TimeBucket::from_index(i.min(BUCKET_COUNT - 1))
}

pub fn bucket_label(bucket: Option<TimeBucket>) -> &'static str {
    bucket.map_or(OUT_OF_RANGE, |b| b.label())
}
