#include "lsalign/lsi.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "lsalign/rng.hpp"
#include "parallel.hpp"

namespace lsalign {

namespace {

Eigen::SparseMatrix<double> to_eigen(const TermDocMatrix& m) {
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> triplets;
  triplets.reserve(m.nnz());
  for (std::size_t c = 0; c < m.cols.size(); ++c) {
    for (const auto& [row, w] : m.cols[c].entries) {
      triplets.emplace_back(static_cast<int>(row), static_cast<int>(c), w);
    }
  }
  Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(m.rows),
                                  static_cast<Eigen::Index>(m.cols.size()));
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::uint64_t counter =
          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
          static_cast<std::uint64_t>(j);
      out(i, j) = rng::counter_gaussian(seed, counter);
    }
  }
  return out;
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 4);
}

void write_f64_le(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

double read_f64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

TrainResult train_lsi(const TermDocMatrix& matrix, const SvdOptions& options) {
  const auto m = static_cast<Eigen::Index>(matrix.rows);
  const auto n = static_cast<Eigen::Index>(matrix.cols.size());
  const auto r = static_cast<Eigen::Index>(options.rank);
  if (r < 1) throw std::runtime_error("train_lsi: rank must be >= 1");
  if (r > std::min(m, n)) {
    throw std::runtime_error("train_lsi: rank " + std::to_string(options.rank) +
                             " exceeds min(m, n) = " + std::to_string(std::min(m, n)));
  }
  if (matrix.nnz() == 0) throw std::runtime_error("train_lsi: matrix has no nonzero entries");

  const Eigen::SparseMatrix<double> sparse = to_eigen(matrix);

  // Sketch width: oversampled but never wider than the matrix.
  const Eigen::Index sketch = std::min(r + static_cast<Eigen::Index>(options.oversample),
                                       std::min(m, n));

  Eigen::MatrixXd q = thin_q(sparse * gaussian_matrix(n, sketch, options.seed));
  for (std::uint32_t it = 0; it < options.power_iters; ++it) {
    const Eigen::MatrixXd w = thin_q(sparse.transpose() * q);
    q = thin_q(sparse * w);
  }

  const Eigen::MatrixXd b = q.transpose() * sparse;  // sketch x n
  Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);

  TrainResult result;
  result.model.term_space = q * svd.matrixU().leftCols(r);
  result.model.singular_values = svd.singularValues().head(r);
  result.doc_space = svd.matrixV().leftCols(r);

  // Fix the sign of each factor column pair for run-to-run reproducibility.
  for (Eigen::Index j = 0; j < r; ++j) {
    Eigen::Index argmax = 0;
    result.model.term_space.col(j).cwiseAbs().maxCoeff(&argmax);
    if (result.model.term_space(argmax, j) < 0.0) {
      result.model.term_space.col(j) *= -1.0;
      result.doc_space.col(j) *= -1.0;
    }
  }
  return result;
}

Embedding fold_in(const SparseVector& q, const LsiModel& model) {
  if (q.dim != model.term_rows()) {
    throw std::runtime_error("fold_in: vector dimension " + std::to_string(q.dim) +
                             " does not match the model's " +
                             std::to_string(model.term_rows()) + " term rows");
  }
  const auto r = static_cast<Eigen::Index>(model.rank());
  for (Eigen::Index i = 0; i < r; ++i) {
    if (model.singular_values[i] == 0.0) {
      throw std::runtime_error(
          "fold_in: zero singular value at position " + std::to_string(i) +
          "; retrain with a smaller rank");
    }
  }
  Embedding out = Embedding::Zero(r);
  for (const auto& [row, w] : q.entries) {
    out.noalias() += w * model.term_space.row(static_cast<Eigen::Index>(row)).transpose();
  }
  out.array() /= model.singular_values.array();
  return out;
}

std::vector<Embedding> embed_corpus(const Corpus& corpus, const LsiModel& model,
                                    const Vocabulary& vocab, const IdfTable& idf,
                                    EmbeddingScaling scaling, std::size_t workers) {
  if (model.vocab_fingerprint != vocab.fingerprint()) {
    throw std::runtime_error(
        "embed_corpus: model was trained with a different vocabulary "
        "(fingerprint mismatch)");
  }
  std::vector<Embedding> embeddings(corpus.size());
  detail::parallel_for(corpus.size(), workers, [&](std::size_t i) {
    const SparseVector col = doc_to_column(corpus.doc(static_cast<DocId>(i)), vocab, idf);
    Embedding e = fold_in(col, model);
    if (scaling == EmbeddingScaling::kSingularValues) {
      e.array() *= model.singular_values.array();
    }
    embeddings[i] = std::move(e);
  });
  return embeddings;
}

void LsiModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
  out.write("LSI1", 4);
  write_u32_le(out, static_cast<std::uint32_t>(term_rows()));
  write_u32_le(out, rank());
  for (Eigen::Index j = 0; j < term_space.cols(); ++j) {
    for (Eigen::Index i = 0; i < term_space.rows(); ++i) {
      write_f64_le(out, term_space(i, j));
    }
  }
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    write_f64_le(out, singular_values[i]);
  }
  out.write(reinterpret_cast<const char*>(vocab_fingerprint.data()),
            static_cast<std::streamsize>(vocab_fingerprint.size()));
  if (!out) throw std::runtime_error("I/O error writing model file '" + path + "'");
}

LsiModel LsiModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LSI1", 4) != 0) {
    throw std::runtime_error("'" + path + "' is not an LSI model file (bad magic)");
  }
  const std::uint32_t m = read_u32_le(in);
  const std::uint32_t r = read_u32_le(in);
  LsiModel model;
  model.term_space.resize(m, r);
  for (std::uint32_t j = 0; j < r; ++j) {
    for (std::uint32_t i = 0; i < m; ++i) {
      model.term_space(i, j) = read_f64_le(in);
    }
  }
  model.singular_values.resize(r);
  for (std::uint32_t i = 0; i < r; ++i) model.singular_values[i] = read_f64_le(in);
  in.read(reinterpret_cast<char*>(model.vocab_fingerprint.data()),
          static_cast<std::streamsize>(model.vocab_fingerprint.size()));
  if (!in) throw std::runtime_error("model file '" + path + "' is truncated");
  return model;
}

}  // namespace lsalign
