#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lsalign/corpus.hpp"
#include "lsalign/vectorizer.hpp"

namespace lsalign {

using Embedding = Eigen::VectorXd;

/// Truncated factors of the bilingual term-document matrix. `term_space`
/// (m x r) has orthonormal columns; `singular_values` is descending and
/// nonnegative. The fingerprint ties the model to the vocabulary whose rows
/// it indexes.
struct LsiModel {
  Eigen::MatrixXd term_space;       // T', m x r
  Eigen::VectorXd singular_values;  // S', length r
  std::array<std::uint8_t, 32> vocab_fingerprint{};

  std::uint32_t rank() const { return static_cast<std::uint32_t>(singular_values.size()); }
  std::size_t term_rows() const { return static_cast<std::size_t>(term_space.rows()); }

  /// Binary container: magic "LSI1", little-endian u32 m and r, T' in
  /// column-major f64, S' as f64 array, then the 32-byte fingerprint.
  void save(const std::string& path) const;
  static LsiModel load(const std::string& path);
};

struct SvdOptions {
  std::uint32_t rank = 1000;
  std::uint64_t seed = 0;
  std::uint32_t oversample = 20;
  std::uint32_t power_iters = 2;
};

struct TrainResult {
  LsiModel model;
  Eigen::MatrixXd doc_space;  // D', n x r: embeddings of the training columns
};

/// Randomized truncated SVD (Gaussian sketch, QR re-orthogonalization,
/// optional power iterations). Deterministic for a fixed seed. Each column
/// of T' is sign-normalized so its largest-magnitude entry is positive.
/// Throws if rank < 1, rank > min(m, n), or the matrix has no nonzeros.
TrainResult train_lsi(const TermDocMatrix& matrix, const SvdOptions& options);

/// Maps a weighted count column into the model space: q^T T' S'^-1.
/// Throws if the dimension disagrees or any singular value is zero.
Embedding fold_in(const SparseVector& q, const LsiModel& model);

enum class EmbeddingScaling {
  kNone,            // raw fold-in vectors q^T T' S'^-1
  kSingularValues,  // scale by S', matching the training-column geometry
};

/// Embeds every document of the corpus (documents with empty columns embed
/// to the zero vector). Requires the model's vocabulary fingerprint to match.
std::vector<Embedding> embed_corpus(const Corpus& corpus, const LsiModel& model,
                                    const Vocabulary& vocab, const IdfTable& idf,
                                    EmbeddingScaling scaling = EmbeddingScaling::kSingularValues,
                                    std::size_t workers = 1);

}  // namespace lsalign
