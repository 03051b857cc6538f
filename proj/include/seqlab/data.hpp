#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace seqlab {

// One encoded record: exactly seq_len token ids plus a class index.
struct Sample {
  std::vector<int> tokens;
  int label = 0;
};

// Token <-> id mapping built from the training split only. Id 0 is always
// the reserved UNK entry, used both for out-of-vocabulary tokens and for
// padding.
class Vocab {
 public:
  static constexpr int kUnkId = 0;
  static constexpr const char* kUnkToken = "UNK";

  // Tokens with count >= min_count are kept, ids assigned by
  // (count desc, token asc). Throws std::invalid_argument on an empty
  // text list.
  static Vocab build(const std::vector<std::string>& train_texts,
                     int min_count = 2);

  int id_of(std::string_view token) const;  // kUnkId when absent
  const std::string& token_of(int id) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  std::uint64_t content_hash() const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  static Vocab from_tokens(std::vector<std::string> tokens);  // cache path

 private:
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> tokens_;  // index == id; tokens_[0] == "UNK"
};

struct Dataset {
  std::string name;
  std::string split;  // "train" / "valid" / "test"
  int num_classes = 0;
  std::vector<std::string> label_names;  // empty for synthetic data
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

// Lowercases and splits on every non-alphanumeric run ("The cat, the CAT!"
// -> [the, cat, the, cat]). May return an empty list.
std::vector<std::string> tokenize(std::string_view text);

// Out-of-vocab tokens map to UNK; short sequences are padded with UNK at
// the end; long ones keep their first seq_len tokens.
std::vector<int> encode(const std::vector<std::string>& tokens,
                        const Vocab& vocab, int seq_len = 32);

struct RawRecord {
  std::string label;
  std::string text;
};
struct RawDataset {
  std::string name;
  std::vector<RawRecord> records;
};

// label<TAB>text, UTF-8, one record per line. Throws with the offending
// line number on malformed rows; an empty file is an error.
RawDataset load_tsv(const std::string& path, const std::string& name);

// Looks for the train/test files of the common R8 distributions inside
// dir (r8-train-all-terms.txt, r8-train-stemmed.txt, r8-train.txt,
// train.txt, and the test equivalents).
std::pair<RawDataset, RawDataset> load_r8(const std::string& dir);

struct AffrRule {
  int positive_min = 4;  // Score >= positive_min -> "positive"
  int negative_max = 2;  // Score <= negative_max -> "negative"; rest dropped
};

// Amazon Fine Food Reviews CSV (public Kaggle layout: header row with at
// least Score and Text columns, RFC 4180 quoting).
RawDataset load_affr(const std::string& path, const AffrRule& rule = {});

struct EncodedCorpus {
  Vocab vocab;
  Dataset train;
  Dataset test;
};

// Builds the vocab from the training records only, maps label strings to
// contiguous ids by sorted order of the training label set, and encodes
// both splits. A test label unseen in training is an error.
EncodedCorpus encode_corpus(const RawDataset& train, const RawDataset& test,
                            int min_count = 2, int seq_len = 32);

// Seeded uniform sample without replacement: round(N * fraction) samples
// become the second returned split, the rest stay in the first; both keep
// the original relative order. Throws unless 0 < fraction < 1.
std::pair<Dataset, Dataset> split_dataset(const Dataset& all, double fraction,
                                          std::uint64_t seed,
                                          const std::string& first_tag,
                                          const std::string& second_tag);

// The 90/10 validation carve-out used by every experiment.
std::pair<Dataset, Dataset> split_validation(const Dataset& train,
                                             double fraction = 0.10,
                                             std::uint64_t seed = 0);

// Binary long-range probe: the label is a function of the token at
// signal_pos alone (token 1 -> class 0, token 2 -> class 1); every other
// position holds noise drawn from [3, vocab_size). Requires
// signal_pos < seq_len and vocab_size >= 4.
Dataset synth_longrange(int n_samples, int seq_len, int vocab_size,
                        int signal_pos, std::uint64_t seed);

// --- encoded-corpus cache ----------------------------------------------
// Optional binary cache of an EncodedCorpus keyed by the source file
// hashes, min_count and seq_len; the stored vocab hash is re-verified on
// load. A stale or foreign file simply misses.
std::uint64_t fnv1a_bytes(std::string_view bytes);
std::uint64_t fnv1a_file(const std::string& path);  // throws if unreadable
bool load_corpus_cache(const std::string& cache_path, std::uint64_t key_hash,
                       EncodedCorpus* out);
void save_corpus_cache(const std::string& cache_path, std::uint64_t key_hash,
                       const EncodedCorpus& corpus);

}  // namespace seqlab
