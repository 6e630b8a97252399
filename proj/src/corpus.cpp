#include "mgs/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

namespace mgs::data {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

void GeneratorConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw DataError(std::string("generator config: ") + name + " must be >= 1");
  };
  positive(n_items, "n_items");
  positive(n_users, "n_users");
  positive(n_queries, "n_queries");
  positive(vocab_size, "vocab_size");
  positive(n_categories, "n_categories");
  positive(n_brands, "n_brands");
  positive(n_shops, "n_shops");
  positive(leafs_per_category, "leafs_per_category");
  positive(words_per_category, "words_per_category");
  positive(title_words_min, "title_words_min");
  positive(train_clicks, "train_clicks");
  if (title_words_max < title_words_min) throw DataError("generator config: title_words_max < title_words_min");
  if (noise_rate < 0.0 || noise_rate > 1.0) throw DataError("generator config: noise_rate must be in [0,1]");
  if (noise_rate > 0.0 && n_categories < 2) {
    throw DataError("generator config: noise clicks need at least 2 categories");
  }
  if (test_fraction <= 0.0 || test_fraction >= 1.0) throw DataError("generator config: test_fraction must be in (0,1)");
  if (vocab_size < words_per_category) {
    throw DataError("generator config: vocab too small to form distinct category word pools");
  }
}

static void config_to_json(const GeneratorConfig& c, json& j) {
  j["n_items"] = c.n_items;
  j["n_users"] = c.n_users;
  j["n_queries"] = c.n_queries;
  j["vocab_size"] = c.vocab_size;
  j["n_categories"] = c.n_categories;
  j["n_brands"] = c.n_brands;
  j["n_shops"] = c.n_shops;
  j["leafs_per_category"] = c.leafs_per_category;
  j["words_per_category"] = c.words_per_category;
  j["title_words_min"] = c.title_words_min;
  j["title_words_max"] = c.title_words_max;
  j["brand_in_title_prob"] = c.brand_in_title_prob;
  j["noise_rate"] = c.noise_rate;
  j["seed"] = c.seed;
  j["realtime_len_max"] = c.realtime_len_max;
  j["short_len_max"] = c.short_len_max;
  j["long_len_max"] = c.long_len_max;
  j["historical_queries"] = c.historical_queries;
  j["train_clicks"] = c.train_clicks;
  j["test_fraction"] = c.test_fraction;
  j["aux_per_query"] = c.aux_per_query;
  j["preferred_categories"] = c.preferred_categories;
}

std::string GeneratorConfig::to_json() const {
  json j;
  config_to_json(*this, j);
  return j.dump(2);
}

GeneratorConfig GeneratorConfig::from_json_file(const std::string& path) {
  json j = json::parse(read_file(path));
  GeneratorConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("n_items", c.n_items);
  get("n_users", c.n_users);
  get("n_queries", c.n_queries);
  get("vocab_size", c.vocab_size);
  get("n_categories", c.n_categories);
  get("n_brands", c.n_brands);
  get("n_shops", c.n_shops);
  get("leafs_per_category", c.leafs_per_category);
  get("words_per_category", c.words_per_category);
  get("title_words_min", c.title_words_min);
  get("title_words_max", c.title_words_max);
  get("brand_in_title_prob", c.brand_in_title_prob);
  get("noise_rate", c.noise_rate);
  get("seed", c.seed);
  get("realtime_len_max", c.realtime_len_max);
  get("short_len_max", c.short_len_max);
  get("long_len_max", c.long_len_max);
  get("historical_queries", c.historical_queries);
  get("train_clicks", c.train_clicks);
  get("test_fraction", c.test_fraction);
  get("aux_per_query", c.aux_per_query);
  get("preferred_categories", c.preferred_categories);
  c.validate();
  return c;
}

const Item& Corpus::item(int item_id) const {
  auto it = item_row.find(item_id);
  if (it == item_row.end()) throw DataError("unknown item " + std::to_string(item_id));
  return items[it->second];
}

const User* Corpus::find_user(int user_id) const {
  auto it = user_row.find(user_id);
  return it == user_row.end() ? nullptr : &users[it->second];
}

int Corpus::n_leafs() const {
  int mx = 0;
  for (const Item& it : items) mx = std::max(mx, it.leaf_category);
  return mx + 1;
}

int Corpus::n_shops() const {
  int mx = 0;
  for (const Item& it : items) mx = std::max(mx, it.shop);
  return mx + 1;
}

bool is_good_rule(const std::vector<int>& query, const Item& it) {
  bool same_cat = std::find(query.begin(), query.end(), it.category) != query.end();
  if (!same_cat) return false;
  for (int q : query) {
    if (std::find(it.title.begin(), it.title.end(), q) != it.title.end()) return true;
  }
  return false;
}

bool Corpus::is_good(const std::vector<int>& query, const Item& it) const {
  return is_good_rule(query, it);
}

std::vector<int> lexical_match(const Corpus& corpus, const std::vector<int>& query, int k) {
  std::vector<std::pair<int, int>> scored;  // (overlap, item_id)
  for (const Item& it : corpus.items) {
    if (!corpus.is_good(query, it)) continue;
    int overlap = 0;
    for (int q : query) {
      if (std::find(it.title.begin(), it.title.end(), q) != it.title.end()) ++overlap;
    }
    scored.emplace_back(overlap, it.item_id);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> out;
  out.reserve(std::min<size_t>(k, scored.size()));
  for (const auto& [ov, id] : scored) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(id);
  }
  return out;
}

namespace {

struct GenState {
  const GeneratorConfig& cfg;
  std::vector<std::string> vocab;
  std::vector<std::vector<int>> pools;  // per category: word token ids
  std::vector<Item> items;
  std::vector<std::vector<int>> items_by_cat;  // by category index
  std::vector<std::vector<int>> user_pref;     // per user: category indices

  int cat_token(int ci) const { return 1 + ci; }
  int brand_token(int bi) const { return 1 + cfg.n_categories + bi; }
  int word_token(int wi) const { return 1 + cfg.n_categories + cfg.n_brands + wi; }
};

std::vector<int> sample_distinct(Rng& rng, const std::vector<int>& from, int k) {
  std::vector<int> pool = from;
  rng.shuffle(pool);
  pool.resize(std::min<size_t>(k, pool.size()));
  return pool;
}

// Query = 1..4 sampled non-category title tokens plus the category token.
std::vector<int> make_query(GenState& st, Rng& rng, const Item& target) {
  std::vector<int> words;
  for (int t : target.title) {
    if (t != target.category) words.push_back(t);
  }
  int want = 1 + static_cast<int>(rng.below(4));
  std::vector<int> q = sample_distinct(rng, words, want);
  q.push_back(target.category);
  rng.shuffle(q);
  return q;
}

int pick_click_item(GenState& st, Rng& rng, const std::vector<int>& query, int target_id) {
  const Item& target = st.items[target_id];
  if (rng.bernoulli(st.cfg.noise_rate)) {
    // Noise: land on a category-mismatched item.
    for (;;) {
      int id = static_cast<int>(rng.below(st.items.size()));
      if (st.items[id].category != target.category) return id;
    }
  }
  if (rng.uniform() < 0.7) return target_id;
  // Sibling: same category, shares a sampled query word.
  std::vector<int> words;
  for (int t : query) {
    if (t != target.category) words.push_back(t);
  }
  if (!words.empty()) {
    int w = words[rng.below(words.size())];
    const std::vector<int>& cat_items = st.items_by_cat[target.category - 1];
    std::vector<int> cands;
    for (int id : cat_items) {
      const Item& it = st.items[id];
      if (std::find(it.title.begin(), it.title.end(), w) != it.title.end()) cands.push_back(id);
    }
    if (!cands.empty()) return cands[rng.below(cands.size())];
  }
  return target_id;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path);
  for (const std::string& l : lines) f << l << '\n';
}

json click_to_json(const Click& c) {
  json j;
  j["user_id"] = c.user_id;
  j["query"] = c.query;
  j["item_id"] = c.item_id;
  j["ts"] = c.ts;
  j["label"] = c.good ? "good" : "bad";
  return j;
}

}  // namespace

void generate(const GeneratorConfig& cfg, const std::string& dir) {
  cfg.validate();
  fs::create_directories(dir);
  fs::create_directories(dir + "/lexicons");
  Rng root(cfg.seed);
  GenState st{cfg};

  // Vocabulary: id 0 reserved for <oov>, then category, brand, word tokens.
  st.vocab.push_back("<oov>");
  for (int c = 0; c < cfg.n_categories; ++c) st.vocab.push_back("cat" + std::to_string(c));
  for (int b = 0; b < cfg.n_brands; ++b) st.vocab.push_back("brand" + std::to_string(b));
  for (int w = 0; w < cfg.vocab_size; ++w) st.vocab.push_back("w" + std::to_string(w));

  Rng pool_rng = root.fork(1);
  std::vector<int> all_words(cfg.vocab_size);
  for (int w = 0; w < cfg.vocab_size; ++w) all_words[w] = st.word_token(w);
  st.pools.resize(cfg.n_categories);
  for (int c = 0; c < cfg.n_categories; ++c) {
    st.pools[c] = sample_distinct(pool_rng, all_words, cfg.words_per_category);
  }

  Rng item_rng = root.fork(2);
  st.items.resize(cfg.n_items);
  st.items_by_cat.resize(cfg.n_categories);
  for (int i = 0; i < cfg.n_items; ++i) {
    Item& it = st.items[i];
    it.item_id = i;
    int ci = static_cast<int>(item_rng.below(cfg.n_categories));
    it.category = st.cat_token(ci);
    it.leaf_category = ci * cfg.leafs_per_category + static_cast<int>(item_rng.below(cfg.leafs_per_category));
    it.brand = st.brand_token(static_cast<int>(item_rng.below(cfg.n_brands)));
    it.shop = static_cast<int>(item_rng.below(cfg.n_shops));
    int n_words = cfg.title_words_min +
                  static_cast<int>(item_rng.below(cfg.title_words_max - cfg.title_words_min + 1));
    it.title = sample_distinct(item_rng, st.pools[ci], n_words);
    it.title.push_back(it.category);
    if (item_rng.bernoulli(cfg.brand_in_title_prob)) it.title.push_back(it.brand);
    item_rng.shuffle(it.title);
    st.items_by_cat[ci].push_back(i);
  }
  for (int c = 0; c < cfg.n_categories; ++c) {
    if (st.items_by_cat[c].empty()) {
      // Tiny corpora can miss a category; reassign one item so queries in
      // any category have at least one relevant item.
      int i = c % cfg.n_items;
      Item& it = st.items[i];
      auto& old_list = st.items_by_cat[it.category - 1];
      old_list.erase(std::find(old_list.begin(), old_list.end(), i));
      int old_cat = it.category;
      it.category = st.cat_token(c);
      it.leaf_category = c * cfg.leafs_per_category;
      for (int& t : it.title) {
        if (t == old_cat) t = it.category;
      }
      st.items_by_cat[c].push_back(i);
    }
  }

  Rng user_rng = root.fork(3);
  std::vector<User> users(cfg.n_users);
  st.user_pref.resize(cfg.n_users);
  std::vector<int> all_cats(cfg.n_categories);
  for (int c = 0; c < cfg.n_categories; ++c) all_cats[c] = c;
  auto sample_pref_item = [&](Rng& rng, const std::vector<int>& pref) {
    if (!pref.empty() && rng.uniform() < 0.8) {
      const std::vector<int>& lst = st.items_by_cat[pref[rng.below(pref.size())]];
      if (!lst.empty()) return lst[rng.below(lst.size())];
    }
    return static_cast<int>(rng.below(st.items.size()));
  };
  for (int u = 0; u < cfg.n_users; ++u) {
    User& usr = users[u];
    usr.user_id = u;
    st.user_pref[u] = sample_distinct(user_rng, all_cats, cfg.preferred_categories);
    const std::vector<int>& pref = st.user_pref[u];
    auto fill_items = [&](std::vector<int>& dst, int max_len) {
      int len = static_cast<int>(user_rng.below(max_len + 1));
      for (int i = 0; i < len; ++i) dst.push_back(sample_pref_item(user_rng, pref));
    };
    fill_items(usr.realtime, cfg.realtime_len_max);
    fill_items(usr.short_seq, cfg.short_len_max);
    auto fill_actions = [&](LongTermActions& item_acts, LongTermActions& shop_acts,
                            LongTermActions& leaf_acts, LongTermActions& brand_acts) {
      auto fill_one = [&](std::vector<int>& items_dst, std::vector<int>& shops_dst,
                          std::vector<int>& leafs_dst, std::vector<int>& brands_dst, int max_len) {
        int len = static_cast<int>(user_rng.below(max_len + 1));
        for (int i = 0; i < len; ++i) {
          int id = sample_pref_item(user_rng, pref);
          const Item& it = st.items[id];
          items_dst.push_back(id);
          shops_dst.push_back(it.shop);
          leafs_dst.push_back(it.leaf_category);
          brands_dst.push_back(it.brand);
        }
      };
      fill_one(item_acts.click, shop_acts.click, leaf_acts.click, brand_acts.click, cfg.long_len_max);
      fill_one(item_acts.buy, shop_acts.buy, leaf_acts.buy, brand_acts.buy, std::max(1, cfg.long_len_max / 2));
      fill_one(item_acts.collect, shop_acts.collect, leaf_acts.collect, brand_acts.collect,
               std::max(1, cfg.long_len_max / 2));
    };
    fill_actions(usr.long_term.item, usr.long_term.shop, usr.long_term.leaf, usr.long_term.brand);
    int n_hist = static_cast<int>(user_rng.below(cfg.historical_queries + 1));
    for (int h = 0; h < n_hist; ++h) {
      int target = sample_pref_item(user_rng, pref);
      usr.history_queries.push_back(make_query(st, user_rng, st.items[target]));
    }
  }

  // Query-instance pool; last test_fraction of it is held out for eval.
  Rng q_rng = root.fork(4);
  struct PoolEntry {
    int user;
    int target;
    std::vector<int> query;
  };
  std::vector<PoolEntry> pool(cfg.n_queries);
  for (int q = 0; q < cfg.n_queries; ++q) {
    PoolEntry& e = pool[q];
    e.user = static_cast<int>(q_rng.below(cfg.n_users));
    std::vector<int> pref = st.user_pref[e.user];
    e.target = (q_rng.uniform() < 0.85) ? sample_pref_item(q_rng, pref)
                                        : static_cast<int>(q_rng.below(st.items.size()));
    e.query = make_query(st, q_rng, st.items[e.target]);
  }
  int n_test = std::max(1, static_cast<int>(std::lround(cfg.n_queries * cfg.test_fraction)));
  int n_train_pool = cfg.n_queries - n_test;
  if (n_train_pool < 1) throw DataError("generator config: no training queries left after test split");

  Rng click_rng = root.fork(5);
  int64_t ts = 1000;
  std::vector<Click> train;
  train.reserve(cfg.train_clicks);
  for (int j = 0; j < cfg.train_clicks; ++j) {
    const PoolEntry& e = pool[click_rng.below(n_train_pool)];
    Click c;
    c.user_id = e.user;
    c.query = e.query;
    c.item_id = pick_click_item(st, click_rng, e.query, e.target);
    c.ts = ts++;
    c.good = is_good_rule(c.query, st.items[c.item_id]);
    train.push_back(std::move(c));
  }

  Rng test_rng = root.fork(6);
  std::vector<Click> test;
  std::vector<AuxPurchase> aux;
  // Temporary corpus view over the generated items for the lexical matcher.
  Corpus view;
  view.items = st.items;
  for (size_t i = 0; i < view.items.size(); ++i) view.item_row[view.items[i].item_id] = static_cast<int>(i);
  for (int q = n_train_pool; q < cfg.n_queries; ++q) {
    const PoolEntry& e = pool[q];
    Click c;
    c.user_id = e.user;
    c.query = e.query;
    c.item_id = pick_click_item(st, test_rng, e.query, e.target);
    c.ts = ts++;
    c.good = is_good_rule(c.query, st.items[c.item_id]);
    std::vector<int> matches = lexical_match(view, e.query, cfg.aux_per_query + 1);
    int emitted = 0;
    for (int id : matches) {
      if (id == c.item_id) continue;
      if (emitted >= cfg.aux_per_query) break;
      AuxPurchase a;
      a.user_id = e.user;
      a.query = e.query;
      a.item_id = id;
      aux.push_back(std::move(a));
      ++emitted;
    }
    test.push_back(std::move(c));
  }

  // Serialize.
  std::vector<std::string> lines;
  lines.reserve(st.items.size());
  for (const Item& it : st.items) {
    json j;
    j["item_id"] = it.item_id;
    j["title"] = it.title;
    j["category"] = it.category;
    j["leaf_category"] = it.leaf_category;
    j["brand"] = it.brand;
    j["shop"] = it.shop;
    lines.push_back(j.dump());
  }
  write_lines(dir + "/items.jsonl", lines);

  lines.clear();
  for (const User& u : users) {
    json j;
    j["user_id"] = u.user_id;
    j["realtime"] = u.realtime;
    j["short"] = u.short_seq;
    auto actions = [](const LongTermActions& a) {
      json x;
      x["click"] = a.click;
      x["buy"] = a.buy;
      x["collect"] = a.collect;
      return x;
    };
    j["long"] = {{"item", actions(u.long_term.item)},
                 {"shop", actions(u.long_term.shop)},
                 {"leaf", actions(u.long_term.leaf)},
                 {"brand", actions(u.long_term.brand)}};
    j["history_queries"] = u.history_queries;
    lines.push_back(j.dump());
  }
  write_lines(dir + "/users.jsonl", lines);

  lines.clear();
  for (const Click& c : train) lines.push_back(click_to_json(c).dump());
  write_lines(dir + "/clicks_train.jsonl", lines);

  lines.clear();
  for (const Click& c : test) lines.push_back(click_to_json(c).dump());
  write_lines(dir + "/clicks_test.jsonl", lines);

  lines.clear();
  for (const AuxPurchase& a : aux) {
    json j;
    j["user_id"] = a.user_id;
    j["query"] = a.query;
    j["item_id"] = a.item_id;
    lines.push_back(j.dump());
  }
  write_lines(dir + "/purchases_aux.jsonl", lines);

  write_lines(dir + "/vocab.txt", st.vocab);

  lines.clear();
  lines.push_back("brand");
  for (int b = 0; b < cfg.n_brands; ++b) lines.push_back(st.vocab[st.brand_token(b)]);
  write_lines(dir + "/lexicons/brand.txt", lines);
  lines.clear();
  lines.push_back("category");
  for (int c = 0; c < cfg.n_categories; ++c) lines.push_back(st.vocab[st.cat_token(c)]);
  write_lines(dir + "/lexicons/category.txt", lines);

  write_file(dir + "/gen_config.json", cfg.to_json() + "\n");
}

namespace {

template <typename Fn>
void parse_jsonl(const std::string& path, Fn&& fn) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      throw DataError(path + " line " + std::to_string(lineno) + ": malformed JSON (" + e.what() + ")");
    }
    try {
      fn(j, lineno);
    } catch (const json::exception& e) {
      throw DataError(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void truncate_oldest(std::vector<int>& seq, int cap) {
  if (static_cast<int>(seq.size()) > cap) {
    seq.erase(seq.begin(), seq.end() - cap);
  }
}

}  // namespace

Corpus load_corpus(const std::string& dir) {
  Corpus c;

  {
    std::ifstream f(dir + "/vocab.txt");
    if (!f) throw DataError("cannot open " + dir + "/vocab.txt");
    std::string tok;
    while (std::getline(f, tok)) c.vocab.push_back(tok);
    if (c.vocab.empty()) throw DataError("vocab.txt is empty");
  }
  const int vocab_n = static_cast<int>(c.vocab.size());

  parse_jsonl(dir + "/items.jsonl", [&](const json& j, int lineno) {
    Item it;
    it.item_id = j.at("item_id").get<int>();
    it.title = j.at("title").get<std::vector<int>>();
    it.category = j.at("category").get<int>();
    it.leaf_category = j.at("leaf_category").get<int>();
    it.brand = j.at("brand").get<int>();
    it.shop = j.at("shop").get<int>();
    if (it.title.empty()) {
      throw DataError(dir + "/items.jsonl line " + std::to_string(lineno) + ": empty title for item " +
                      std::to_string(it.item_id));
    }
    for (int t : it.title) {
      if (t < 0 || t >= vocab_n) {
        throw DataError(dir + "/items.jsonl line " + std::to_string(lineno) + ": title token " +
                        std::to_string(t) + " outside vocab");
      }
    }
    if (it.category < 0 || it.category >= vocab_n || it.brand < 0 || it.brand >= vocab_n ||
        it.leaf_category < 0 || it.shop < 0) {
      throw DataError(dir + "/items.jsonl line " + std::to_string(lineno) + ": attribute id out of range");
    }
    c.items.push_back(std::move(it));
  });
  std::sort(c.items.begin(), c.items.end(), [](const Item& a, const Item& b) { return a.item_id < b.item_id; });
  for (size_t i = 0; i < c.items.size(); ++i) {
    if (i > 0 && c.items[i].item_id == c.items[i - 1].item_id) {
      throw DataError("duplicate item_id " + std::to_string(c.items[i].item_id));
    }
    c.item_row[c.items[i].item_id] = static_cast<int>(i);
  }

  auto check_item = [&](int id, const std::string& where, int lineno) {
    if (!c.item_row.count(id)) {
      throw DataError(where + " line " + std::to_string(lineno) + ": unknown item " + std::to_string(id));
    }
  };

  parse_jsonl(dir + "/users.jsonl", [&](const json& j, int lineno) {
    User u;
    u.user_id = j.at("user_id").get<int>();
    u.realtime = j.at("realtime").get<std::vector<int>>();
    u.short_seq = j.at("short").get<std::vector<int>>();
    const json& lt = j.at("long");
    auto actions = [&](const char* key, LongTermActions& a) {
      const json& x = lt.at(key);
      a.click = x.at("click").get<std::vector<int>>();
      a.buy = x.at("buy").get<std::vector<int>>();
      a.collect = x.at("collect").get<std::vector<int>>();
    };
    actions("item", u.long_term.item);
    actions("shop", u.long_term.shop);
    actions("leaf", u.long_term.leaf);
    actions("brand", u.long_term.brand);
    u.history_queries = j.at("history_queries").get<std::vector<std::vector<int>>>();
    const std::string where = dir + "/users.jsonl";
    for (int id : u.realtime) check_item(id, where, lineno);
    for (int id : u.short_seq) check_item(id, where, lineno);
    for (const std::vector<int>* seq : {&u.long_term.item.click, &u.long_term.item.buy, &u.long_term.item.collect}) {
      for (int id : *seq) check_item(id, where, lineno);
    }
    truncate_oldest(u.realtime, kRealtimeCap);
    truncate_oldest(u.short_seq, kShortCap);
    for (LongTermActions* a : {&u.long_term.item, &u.long_term.shop, &u.long_term.leaf, &u.long_term.brand}) {
      truncate_oldest(a->click, kLongCap);
      truncate_oldest(a->buy, kLongCap);
      truncate_oldest(a->collect, kLongCap);
    }
    c.users.push_back(std::move(u));
  });
  std::sort(c.users.begin(), c.users.end(), [](const User& a, const User& b) { return a.user_id < b.user_id; });
  for (size_t i = 0; i < c.users.size(); ++i) {
    if (i > 0 && c.users[i].user_id == c.users[i - 1].user_id) {
      throw DataError("duplicate user_id " + std::to_string(c.users[i].user_id));
    }
    c.user_row[c.users[i].user_id] = static_cast<int>(i);
  }

  auto load_clicks = [&](const std::string& path, std::vector<Click>& dst) {
    parse_jsonl(path, [&](const json& j, int lineno) {
      Click cl;
      cl.user_id = j.at("user_id").get<int>();
      cl.query = j.at("query").get<std::vector<int>>();
      cl.item_id = j.at("item_id").get<int>();
      cl.ts = j.at("ts").get<int64_t>();
      std::string label = j.at("label").get<std::string>();
      if (label != "good" && label != "bad") {
        throw DataError(path + " line " + std::to_string(lineno) + ": bad label '" + label + "'");
      }
      cl.good = label == "good";
      check_item(cl.item_id, path, lineno);
      if (!c.user_row.count(cl.user_id)) {
        throw DataError(path + " line " + std::to_string(lineno) + ": unknown user " + std::to_string(cl.user_id));
      }
      dst.push_back(std::move(cl));
    });
  };
  load_clicks(dir + "/clicks_train.jsonl", c.train_clicks);
  load_clicks(dir + "/clicks_test.jsonl", c.test_clicks);

  parse_jsonl(dir + "/purchases_aux.jsonl", [&](const json& j, int lineno) {
    AuxPurchase a;
    a.user_id = j.at("user_id").get<int>();
    a.query = j.at("query").get<std::vector<int>>();
    a.item_id = j.at("item_id").get<int>();
    check_item(a.item_id, dir + "/purchases_aux.jsonl", lineno);
    c.aux_purchases.push_back(std::move(a));
  });

  return c;
}

}  // namespace mgs::data
