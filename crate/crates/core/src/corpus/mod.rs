//! Tweet ingestion: cleaning, vocabulary construction, encoding and dataset
//! assembly.
//!
//! The cleaning pipeline lowercases, strips URLs, pulls hashtags out of the
//! text, drops mentions, punctuation, digits and non-ASCII characters, and
//! whitespace-tokenizes what is left. Vocabularies keep words occurring at
//! least twice and hashtags occurring more than five times; id 0 is reserved
//! for padding, id 1 for unknown terms.

mod clean;
mod encode;
mod io;
mod vocab;

pub use clean::{clean_tweet, detokenize};
pub use encode::encode_tweet;
pub use io::{load_dataset, read_labels_file, read_tweets_file, write_labels_file, write_tweets_file};
pub use vocab::{build_vocabulary, read_vocab_dump, write_vocab_dump};

use std::collections::HashMap;

/// Reserved id for padding positions.
pub const PAD_ID: u32 = 0;
/// Reserved id for out-of-vocabulary terms.
pub const UNK_ID: u32 = 1;
/// Number of reserved ids preceding the first real term id.
pub const RESERVED_IDS: u32 = 2;

/// A tweet as it appears in the input file, before any cleaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTweet {
    pub tweet_id: String,
    pub user_id: String,
    /// Epoch seconds.
    pub timestamp: i64,
    pub text: String,
}

/// A cleaned tweet: lowercase ASCII word tokens plus extracted hashtags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanTweet {
    pub tokens: Vec<String>,
    pub hashtags: Vec<String>,
    pub user_id: String,
    pub timestamp: i64,
    /// Stance index into the dataset's label set, when annotated.
    pub label: Option<usize>,
}

/// Term-to-id maps for words and hashtags, with the reserved padding and
/// unknown ids, plus the maximum sequence lengths observed in the corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub word_index: HashMap<String, u32>,
    pub hashtag_index: HashMap<String, u32>,
    pub max_tweet_len: usize,
    pub max_hashtag_len: usize,
    /// (term, id, frequency) in dump order: descending frequency, then
    /// lexicographic.
    pub word_entries: Vec<(String, u32, u64)>,
    pub hashtag_entries: Vec<(String, u32, u64)>,
}

impl Vocabulary {
    /// Number of distinct indexed words (reserved ids excluded).
    pub fn word_count(&self) -> usize {
        self.word_index.len()
    }

    /// Number of distinct indexed hashtags (reserved ids excluded).
    pub fn hashtag_count(&self) -> usize {
        self.hashtag_index.len()
    }

    /// Number of word embedding rows: indexed words plus padding and unknown.
    pub fn word_rows(&self) -> usize {
        self.word_index.len() + RESERVED_IDS as usize
    }

    /// Number of hashtag embedding rows.
    pub fn hashtag_rows(&self) -> usize {
        self.hashtag_index.len() + RESERVED_IDS as usize
    }

    pub fn word_id(&self, token: &str) -> u32 {
        self.word_index.get(token).copied().unwrap_or(UNK_ID)
    }

    pub fn hashtag_id(&self, tag: &str) -> u32 {
        self.hashtag_index.get(tag).copied().unwrap_or(UNK_ID)
    }
}

/// A tweet encoded against a vocabulary: fixed-length padded id sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedTweet {
    pub tweet_id: String,
    pub user_id: String,
    pub timestamp: i64,
    pub word_ids: Vec<u32>,
    pub hashtag_ids: Vec<u32>,
    pub label: Option<usize>,
}

impl EncodedTweet {
    /// Count of non-padding word positions (always a prefix).
    pub fn token_len(&self) -> usize {
        self.word_ids.iter().take_while(|&&id| id != PAD_ID).count()
    }
}

/// An encoded, temporally ordered dataset with its labeled subset.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Sorted non-decreasing by timestamp; ties keep input order.
    pub tweets: Vec<EncodedTweet>,
    /// Ordered stance label names.
    pub label_set: Vec<String>,
    /// Indices into `tweets` that carry a gold label.
    pub labeled_subset: Vec<usize>,
    /// Time horizon `[0, T]` covered by the tweets.
    pub horizon: (i64, i64),
    pub vocabulary: Vocabulary,
}

impl Dataset {
    pub fn label_count(&self) -> usize {
        self.label_set.len()
    }

    /// Restrict to the labeled subset plus a deterministic uniform subsample
    /// of the unlabeled remainder. Relative order (and therefore temporal
    /// order) of the surviving tweets is preserved.
    pub fn with_unlabeled_fraction(&self, fraction: f64, seed: u64) -> Dataset {
        use rand::seq::SliceRandom;
        assert!((0.0..=1.0).contains(&fraction));
        if fraction >= 1.0 {
            return self.clone();
        }
        let labeled: std::collections::HashSet<usize> = self.labeled_subset.iter().copied().collect();
        let unlabeled: Vec<usize> = (0..self.tweets.len()).filter(|i| !labeled.contains(i)).collect();
        let keep_n = (unlabeled.len() as f64 * fraction).round() as usize;
        let mut rng = crate::seed::rng(seed, &[0x5ab5]);
        let mut sampled = unlabeled;
        sampled.shuffle(&mut rng);
        sampled.truncate(keep_n);
        let mut keep: Vec<bool> = vec![false; self.tweets.len()];
        for &i in &sampled {
            keep[i] = true;
        }
        for &i in &self.labeled_subset {
            keep[i] = true;
        }
        let mut tweets = Vec::new();
        let mut remap = vec![usize::MAX; self.tweets.len()];
        for (i, tweet) in self.tweets.iter().enumerate() {
            if keep[i] {
                remap[i] = tweets.len();
                tweets.push(tweet.clone());
            }
        }
        let labeled_subset = self.labeled_subset.iter().map(|&i| remap[i]).collect();
        Dataset {
            tweets,
            label_set: self.label_set.clone(),
            labeled_subset,
            horizon: self.horizon,
            vocabulary: self.vocabulary.clone(),
        }
    }
}
