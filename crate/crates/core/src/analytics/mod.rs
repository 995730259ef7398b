//! Time-bucketed sentiment series, term-frequency tables, co-occurrence
//! clouds and per-actor class counts.

mod buckets;
mod frequency;
mod series;

pub use buckets::{bucket_label, bucket_of, TimeBucket, BUCKET_COUNT, OUT_OF_RANGE};
pub use frequency::{
    actor_exclusions, cooccurrence_cloud, frequency_heatmap, term_frequencies, FrequencyHeatmap,
    FrequencyTable,
};
pub use series::{
    actor_sentiment_counts, avg_sentiment_series, combined_avg_polarity, ActorSentimentCounts,
    SentimentSeries, SeriesCell, DEFAULT_POLARITY_SCALE,
};
