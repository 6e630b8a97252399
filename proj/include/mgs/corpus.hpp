#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mgs/common.hpp"

namespace mgs::data {

// Sequence caps applied at load time (truncate oldest).
inline constexpr int kRealtimeCap = 50;
inline constexpr int kShortCap = 100;
inline constexpr int kLongCap = 100;

struct Item {
  int item_id = 0;
  std::vector<int> title;  // token ids; category (and often brand) token included
  int category = 0;        // vocab token id of the category token
  int leaf_category = 0;   // separate id space
  int brand = 0;           // vocab token id of the brand token
  int shop = 0;            // separate id space
};

struct LongTermActions {
  std::vector<int> click, buy, collect;
};

// Attribute-level long-term behaviors; entries are ids in the attribute's
// own space (item ids, shop ids, leaf ids, brand token ids).
struct LongTerm {
  LongTermActions item, shop, leaf, brand;
};

struct User {
  int user_id = 0;
  std::vector<int> realtime;   // item ids, oldest first
  std::vector<int> short_seq;  // item ids, oldest first
  LongTerm long_term;
  std::vector<std::vector<int>> history_queries;  // token id lists
};

struct Click {
  int user_id = 0;
  std::vector<int> query;
  int item_id = 0;
  int64_t ts = 0;
  bool good = false;
};

struct AuxPurchase {
  int user_id = 0;
  std::vector<int> query;
  int item_id = 0;
};

struct GeneratorConfig {
  int n_items = 10000;
  int n_users = 1000;
  int n_queries = 6000;  // query-instance pool; split into train/test parts
  int vocab_size = 1200;  // generic words, excluding category/brand tokens
  int n_categories = 25;
  int n_brands = 40;
  int n_shops = 200;
  int leafs_per_category = 4;
  int words_per_category = 60;
  int title_words_min = 3;
  int title_words_max = 7;
  double brand_in_title_prob = 0.7;
  double noise_rate = 0.1;  // clicks landing on category-mismatched items
  uint64_t seed = 1;
  int realtime_len_max = 8;
  int short_len_max = 16;
  int long_len_max = 8;
  int historical_queries = 4;
  int train_clicks = 40000;
  double test_fraction = 0.1;
  int aux_per_query = 3;
  int preferred_categories = 3;

  void validate() const;
  static GeneratorConfig from_json_file(const std::string& path);
  std::string to_json() const;
};

struct Corpus {
  std::vector<Item> items;  // ascending item_id
  std::vector<User> users;  // ascending user_id
  std::vector<Click> train_clicks;
  std::vector<Click> test_clicks;
  std::vector<AuxPurchase> aux_purchases;
  std::vector<std::string> vocab;  // index = token id; 0 is <oov>

  std::unordered_map<int, int> item_row;  // item_id -> row index
  std::unordered_map<int, int> user_row;

  const Item& item(int item_id) const;
  const User* find_user(int user_id) const;
  int n_leafs() const;
  int n_shops() const;

  // Planted relevance: same category token in the query AND >= 1 shared
  // title token. This is the ground truth the generator wires in.
  bool is_good(const std::vector<int>& query, const Item& it) const;
};

bool is_good_rule(const std::vector<int>& query, const Item& it);

// Writes items.jsonl, users.jsonl, clicks_train.jsonl, clicks_test.jsonl,
// purchases_aux.jsonl, vocab.txt, lexicons/{brand,category}.txt and
// gen_config.json into dir. Deterministic for a given seed.
void generate(const GeneratorConfig& cfg, const std::string& dir);

// Loads and validates a corpus directory. Referential integrity failures
// and malformed lines raise DataError with the offending id / line number.
Corpus load_corpus(const std::string& dir);

// Brute-force lexical matcher used as the generator's own sanity oracle and
// to synthesize the purchased-elsewhere records: candidates share the
// query's category token and at least one title token, ranked by overlap
// size descending, then item_id ascending.
std::vector<int> lexical_match(const Corpus& corpus, const std::vector<int>& query, int k);

}  // namespace mgs::data
