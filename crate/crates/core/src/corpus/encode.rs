//! Fixed-length id encoding of cleaned tweets.

use super::{CleanTweet, EncodedTweet, Vocabulary, PAD_ID};

fn encode_sequence(terms: &[String], lookup: impl Fn(&str) -> u32, len: usize) -> Vec<u32> {
    let mut ids: Vec<u32> = terms.iter().take(len).map(|t| lookup(t)).collect();
    ids.resize(len, PAD_ID);
    ids
}

/// Encode a cleaned tweet: token ids padded or truncated (keeping the prefix)
/// to the vocabulary's max tweet length, out-of-vocabulary terms mapped to
/// the unknown id; hashtags likewise against the hashtag length.
pub fn encode_tweet(tweet_id: &str, tweet: &CleanTweet, vocab: &Vocabulary) -> EncodedTweet {
    EncodedTweet {
        tweet_id: tweet_id.to_string(),
        user_id: tweet.user_id.clone(),
        timestamp: tweet.timestamp,
        word_ids: encode_sequence(&tweet.tokens, |t| vocab.word_id(t), vocab.max_tweet_len),
        hashtag_ids: encode_sequence(&tweet.hashtags, |t| vocab.hashtag_id(t), vocab.max_hashtag_len),
        label: tweet.label,
    }
}
