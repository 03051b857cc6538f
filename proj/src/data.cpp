#include "seqlab/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "seqlab/rng.hpp"

namespace seqlab {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (is_ascii_alnum(c)) {
      current.push_back(ascii_lower(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

Vocab Vocab::build(const std::vector<std::string>& train_texts,
                   int min_count) {
  if (train_texts.empty()) {
    throw std::invalid_argument("Vocab::build: empty corpus");
  }
  std::unordered_map<std::string, long> counts;
  for (const auto& text : train_texts) {
    for (auto& tok : tokenize(text)) counts[std::move(tok)] += 1;
  }
  std::vector<std::pair<std::string, long>> kept;
  kept.reserve(counts.size());
  for (auto& [tok, n] : counts) {
    if (n >= min_count && tok != kUnkToken) kept.emplace_back(tok, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocab v;
  v.tokens_.push_back(kUnkToken);
  v.ids_.emplace(kUnkToken, kUnkId);
  for (auto& [tok, n] : kept) {
    v.ids_.emplace(tok, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(tok);
  }
  return v;
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
  if (tokens.empty() || tokens[0] != kUnkToken) {
    throw std::invalid_argument("Vocab::from_tokens: UNK must be id 0");
  }
  Vocab v;
  v.tokens_ = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens_.size(); ++i) {
    v.ids_.emplace(v.tokens_[i], static_cast<int>(i));
  }
  return v;
}

int Vocab::id_of(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocab::token_of(int id) const {
  if (id < 0 || id >= size()) {
    throw std::invalid_argument("Vocab::token_of: id out of range");
  }
  return tokens_[id];
}

std::uint64_t Vocab::content_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& tok : tokens_) {
    for (unsigned char c : tok) {
      h = (h ^ c) * 0x100000001b3ULL;
    }
    h = (h ^ 0xff) * 0x100000001b3ULL;  // separator
  }
  return h;
}

std::vector<int> encode(const std::vector<std::string>& tokens,
                        const Vocab& vocab, int seq_len) {
  if (seq_len < 1) {
    throw std::invalid_argument("encode: seq_len must be >= 1");
  }
  std::vector<int> ids(seq_len, Vocab::kUnkId);
  const std::size_t n = std::min<std::size_t>(tokens.size(), seq_len);
  for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.id_of(tokens[i]);
  return ids;
}

RawDataset load_tsv(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(name + ": cannot open " + path);
  }
  RawDataset ds;
  ds.name = name;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": missing tab between label and text");
    }
    RawRecord rec;
    rec.label = line.substr(0, tab);
    rec.text = line.substr(tab + 1);
    if (rec.label.empty()) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": empty label");
    }
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) {
    throw std::runtime_error(path + ": no records (empty dataset)");
  }
  return ds;
}

std::pair<RawDataset, RawDataset> load_r8(const std::string& dir) {
  namespace fs = std::filesystem;
  const char* train_names[] = {"r8-train-all-terms.txt",
                               "r8-train-stemmed.txt", "r8-train.txt",
                               "train.txt"};
  const char* test_names[] = {"r8-test-all-terms.txt", "r8-test-stemmed.txt",
                              "r8-test.txt", "test.txt"};
  auto find = [&](auto& names, const char* what) -> std::string {
    for (const char* n : names) {
      fs::path p = fs::path(dir) / n;
      if (fs::exists(p)) return p.string();
    }
    std::string tried;
    for (const char* n : names) tried += std::string(" ") + n;
    throw std::runtime_error(std::string("load_r8: no ") + what +
                             " file in " + dir + "; tried:" + tried);
  };
  return {load_tsv(find(train_names, "train"), "r8"),
          load_tsv(find(test_names, "test"), "r8")};
}

namespace {

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
// Returns one record per call; false at end of input.
bool csv_next_record(std::istream& in, std::vector<std::string>* fields,
                     long* record_no) {
  fields->clear();
  std::string field;
  bool in_quotes = false;
  bool seen_any = false;
  int c;
  while ((c = in.get()) != EOF) {
    seen_any = true;
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields->push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  if (!seen_any) return false;
  fields->push_back(std::move(field));
  ++*record_no;
  return true;
}

}  // namespace

RawDataset load_affr(const std::string& path, const AffrRule& rule) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_affr: cannot open " + path);
  }
  std::vector<std::string> fields;
  long record_no = 0;
  if (!csv_next_record(in, &fields, &record_no)) {
    throw std::runtime_error("load_affr: " + path + " is empty");
  }
  int score_col = -1, text_col = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == "Score") score_col = static_cast<int>(i);
    if (fields[i] == "Text") text_col = static_cast<int>(i);
  }
  if (score_col < 0 || text_col < 0) {
    throw std::runtime_error(
        "load_affr: header must contain Score and Text columns");
  }

  RawDataset ds;
  ds.name = "affr";
  while (csv_next_record(in, &fields, &record_no)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
    if (static_cast<int>(fields.size()) <= std::max(score_col, text_col)) {
      throw std::runtime_error("load_affr: record " +
                               std::to_string(record_no) + ": too few fields");
    }
    int score = 0;
    try {
      score = std::stoi(fields[score_col]);
    } catch (const std::exception&) {
      throw std::runtime_error("load_affr: record " +
                               std::to_string(record_no) +
                               ": Score is not an integer");
    }
    RawRecord rec;
    if (score >= rule.positive_min) {
      rec.label = "positive";
    } else if (score <= rule.negative_max) {
      rec.label = "negative";
    } else {
      continue;  // neutral ratings dropped
    }
    rec.text = fields[text_col];
    ds.records.push_back(std::move(rec));
  }
  if (ds.records.empty()) {
    throw std::runtime_error("load_affr: " + path +
                             " produced no usable records");
  }
  return ds;
}

EncodedCorpus encode_corpus(const RawDataset& train, const RawDataset& test,
                            int min_count, int seq_len) {
  std::vector<std::string> texts;
  texts.reserve(train.records.size());
  for (const auto& r : train.records) texts.push_back(r.text);
  Vocab vocab = Vocab::build(texts, min_count);

  std::vector<std::string> labels;
  for (const auto& r : train.records) labels.push_back(r.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::unordered_map<std::string, int> label_ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    label_ids.emplace(labels[i], static_cast<int>(i));
  }

  auto encode_split = [&](const RawDataset& raw,
                          const std::string& split) -> Dataset {
    Dataset ds;
    ds.name = raw.name;
    ds.split = split;
    ds.num_classes = static_cast<int>(labels.size());
    ds.label_names = labels;
    ds.samples.reserve(raw.records.size());
    for (std::size_t i = 0; i < raw.records.size(); ++i) {
      const auto& rec = raw.records[i];
      auto it = label_ids.find(rec.label);
      if (it == label_ids.end()) {
        throw std::runtime_error(raw.name + " " + split + ": record " +
                                 std::to_string(i + 1) + ": label '" +
                                 rec.label + "' never appears in training");
      }
      ds.samples.push_back(
          Sample{encode(tokenize(rec.text), vocab, seq_len), it->second});
    }
    return ds;
  };

  EncodedCorpus corpus{std::move(vocab), encode_split(train, "train"),
                       encode_split(test, "test")};
  return corpus;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& all, double fraction,
                                          std::uint64_t seed,
                                          const std::string& first_tag,
                                          const std::string& second_tag) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("split_dataset: fraction must be in (0, 1)");
  }
  const std::size_t n = all.samples.size();
  const std::size_t take =
      static_cast<std::size_t>(std::lround(static_cast<double>(n) * fraction));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<char> picked(n, 0);
  for (std::size_t i = 0; i < take; ++i) picked[idx[i]] = 1;

  Dataset first, second;
  first.name = second.name = all.name;
  first.num_classes = second.num_classes = all.num_classes;
  first.label_names = second.label_names = all.label_names;
  first.split = first_tag;
  second.split = second_tag;
  for (std::size_t i = 0; i < n; ++i) {
    (picked[i] ? second : first).samples.push_back(all.samples[i]);
  }
  return {std::move(first), std::move(second)};
}

std::pair<Dataset, Dataset> split_validation(const Dataset& train,
                                             double fraction,
                                             std::uint64_t seed) {
  return split_dataset(train, fraction, seed, "train", "valid");
}

Dataset synth_longrange(int n_samples, int seq_len, int vocab_size,
                        int signal_pos, std::uint64_t seed) {
  if (n_samples < 1) {
    throw std::invalid_argument("synth_longrange: n_samples must be >= 1");
  }
  if (signal_pos < 0 || signal_pos >= seq_len) {
    throw std::invalid_argument(
        "synth_longrange: signal_pos must lie inside the sequence");
  }
  if (vocab_size < 4) {
    throw std::invalid_argument(
        "synth_longrange: vocab_size must be >= 4 (ids 1,2 carry the signal, "
        "noise needs 3..)");
  }
  Dataset ds;
  ds.name = "synth_longrange";
  ds.split = "train";
  ds.num_classes = 2;
  Rng rng(seed);
  ds.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    Sample s;
    s.label = static_cast<int>(rng.next_below(2));
    s.tokens.resize(seq_len);
    for (int t = 0; t < seq_len; ++t) {
      s.tokens[t] = 3 + static_cast<int>(rng.next_below(vocab_size - 3));
    }
    s.tokens[signal_pos] = 1 + s.label;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

// --- cache ---------------------------------------------------------------

std::uint64_t fnv1a_bytes(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  return fnv1a_bytes(read_file(path));
}

namespace {

constexpr char kCacheMagic[8] = {'S', 'E', 'Q', 'L', 'A', 'B', 'D', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_str(std::ostream& out, const std::string& s) {
  put_i32(out, static_cast<std::int32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}
std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::int32_t get_i32(std::istream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::string get_str(std::istream& in) {
  const std::int32_t n = get_i32(in);
  if (n < 0) throw std::runtime_error("corpus cache: negative length");
  std::string s(static_cast<std::size_t>(n), '\0');
  in.read(s.data(), n);
  return s;
}

void put_dataset(std::ostream& out, const Dataset& ds) {
  put_str(out, ds.name);
  put_str(out, ds.split);
  put_i32(out, ds.num_classes);
  put_i32(out, static_cast<std::int32_t>(ds.label_names.size()));
  for (const auto& l : ds.label_names) put_str(out, l);
  put_i32(out, static_cast<std::int32_t>(ds.samples.size()));
  for (const auto& s : ds.samples) {
    put_i32(out, s.label);
    put_i32(out, static_cast<std::int32_t>(s.tokens.size()));
    out.write(reinterpret_cast<const char*>(s.tokens.data()),
              static_cast<std::streamsize>(s.tokens.size() * sizeof(int)));
  }
}

Dataset get_dataset(std::istream& in) {
  Dataset ds;
  ds.name = get_str(in);
  ds.split = get_str(in);
  ds.num_classes = get_i32(in);
  const std::int32_t nl = get_i32(in);
  for (std::int32_t i = 0; i < nl; ++i) ds.label_names.push_back(get_str(in));
  const std::int32_t ns = get_i32(in);
  ds.samples.resize(static_cast<std::size_t>(ns));
  for (auto& s : ds.samples) {
    s.label = get_i32(in);
    const std::int32_t nt = get_i32(in);
    s.tokens.resize(static_cast<std::size_t>(nt));
    in.read(reinterpret_cast<char*>(s.tokens.data()),
            static_cast<std::streamsize>(s.tokens.size() * sizeof(int)));
  }
  return ds;
}

}  // namespace

bool load_corpus_cache(const std::string& cache_path, std::uint64_t key_hash,
                       EncodedCorpus* out) {
  std::ifstream in(cache_path, std::ios::binary);
  if (!in) return false;
  try {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kCacheMagic, sizeof kCacheMagic) != 0) {
      return false;
    }
    if (get_u64(in) != key_hash) return false;
    const std::uint64_t vocab_hash = get_u64(in);
    const std::int32_t n_tokens = get_i32(in);
    std::vector<std::string> tokens;
    tokens.reserve(static_cast<std::size_t>(n_tokens));
    for (std::int32_t i = 0; i < n_tokens; ++i) tokens.push_back(get_str(in));
    Vocab vocab = Vocab::from_tokens(std::move(tokens));
    if (vocab.content_hash() != vocab_hash) return false;
    Dataset train = get_dataset(in);
    Dataset test = get_dataset(in);
    if (!in) return false;
    *out = EncodedCorpus{std::move(vocab), std::move(train), std::move(test)};
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void save_corpus_cache(const std::string& cache_path, std::uint64_t key_hash,
                       const EncodedCorpus& corpus) {
  std::ofstream out(cache_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("corpus cache: cannot write " + cache_path);
  }
  out.write(kCacheMagic, sizeof kCacheMagic);
  put_u64(out, key_hash);
  put_u64(out, corpus.vocab.content_hash());
  put_i32(out, corpus.vocab.size());
  for (const auto& tok : corpus.vocab.tokens()) put_str(out, tok);
  put_dataset(out, corpus.train);
  put_dataset(out, corpus.test);
}

}  // namespace seqlab
