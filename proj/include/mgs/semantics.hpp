#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mgs/nn.hpp"

namespace mgs::model {

struct ModelConfig {
  int dim = 128;
  int heads = 8;
  int lstm_layers = 2;
  float lstm_dropout = 0.2f;
  int ff_mult = 4;
  // The projection-free query attentions use raw logits; self-attention
  // scales by 1/sqrt(head dim). Both are switchable.
  bool scaled_query_attention = false;
  bool scaled_self_attention = true;
  int bigram_buckets = 1 << 16;
  int realtime_cap = 50;
  int short_cap = 100;
  int long_cap = 100;
  bool char_tokenizer = false;  // whitespace segmentation by default

  void validate() const;
  int behav_item_dim() const { return dim / 2; }
  int behav_side_dim() const { return dim / 8; }
};

struct Tokenized {
  std::vector<std::string> segments;
  std::vector<std::vector<uint32_t>> chars;  // unicode scalar values per segment
};

// Lowercases ASCII, splits on whitespace (or per character in char mode),
// and decodes each segment into unicode scalar values.
Tokenized tokenize(const std::string& query, bool char_mode = false);

// Token and character id spaces. Id 0 is the reserved OOV id in both.
class Vocab {
 public:
  static Vocab build(const std::vector<std::string>& tokens);
  int token_id(const std::string& tok) const;
  int char_id(uint32_t cp) const;
  const std::string& token(int id) const { return tokens_[id]; }
  int n_tokens() const { return static_cast<int>(tokens_.size()); }
  int n_chars() const { return n_chars_; }
  static int bigram_bucket(uint32_t c1, uint32_t c2, int n_buckets);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> token_ids_;
  std::unordered_map<uint32_t, int> char_ids_;
  int n_chars_ = 1;
};

// Segment-level view of one query, ready for embedding lookups.
struct QueryInput {
  std::vector<int> seg_ids;
  std::vector<std::vector<int>> seg_chars;    // char ids per segment
  std::vector<std::vector<int>> seg_bigrams;  // bigram bucket ids per segment (empty if 1 char)
};

QueryInput query_from_tokens(const Vocab& vocab, const std::vector<int>& token_ids, int bigram_buckets);
QueryInput query_from_text(const Vocab& vocab, const std::string& text, int bigram_buckets,
                           bool char_mode = false);

struct SemanticsParams {
  int char_table = -1;    // [n_chars x d]
  int bigram_table = -1;  // [buckets x d]
  int token_table = -1;   // [vocab x d], shared with item titles
  EncoderLayerParams trm;
  static SemanticsParams create(ParamStore& ps, const ModelConfig& cfg, int n_chars, int n_tokens,
                                Rng& rng);
};

struct QuerySemantics {
  Graph::NodeId unigram, bigram, segment, segment_seq, history, mixed;
  Graph::NodeId all;  // [6 x d], row order as above with mixed = sum of the first five
};

// history_queries: token-id lists, each pooled to one vector by segment mean.
QuerySemantics build_query_semantics(Ctx& ctx, const SemanticsParams& p, const ModelConfig& cfg,
                                     const QueryInput& q,
                                     const std::vector<std::vector<int>>& history_queries);

}  // namespace mgs::model
