#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lsalign/lsi.hpp"
#include "lsalign/scoring.hpp"
#include "lsalign/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lsalign;
using doctest::Approx;

namespace {

TermDocMatrix diagonal_matrix(const std::vector<double>& values) {
  TermDocMatrix m;
  m.rows = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    SparseVector col;
    col.dim = values.size();
    if (values[i] != 0.0) col.entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
    m.cols.push_back(col);
    m.col_pairs.emplace_back("s" + std::to_string(i), "t" + std::to_string(i));
  }
  return m;
}

TermDocMatrix random_sparse(std::size_t rows, std::size_t cols, double density,
                            std::uint64_t seed) {
  rng::SplitMix gen(seed);
  TermDocMatrix m;
  m.rows = rows;
  for (std::size_t c = 0; c < cols; ++c) {
    SparseVector col;
    col.dim = rows;
    for (std::size_t r = 0; r < rows; ++r) {
      if (gen.uniform() < density) {
        col.entries.emplace_back(static_cast<std::uint32_t>(r), 0.25 + gen.uniform());
      }
    }
    if (col.empty()) col.entries.emplace_back(0, 1.0);  // keep every column nonzero
    m.cols.push_back(col);
    m.col_pairs.emplace_back("s" + std::to_string(c), "t" + std::to_string(c));
  }
  return m;
}

double reconstruction_residual(const TermDocMatrix& m, const TrainResult& trained) {
  const Eigen::MatrixXd dense = oracles::to_dense(m);
  const Eigen::MatrixXd approx = trained.model.term_space *
                                 trained.model.singular_values.asDiagonal() *
                                 trained.doc_space.transpose();
  return (dense - approx).norm();
}

SparseVector column_of(const TermDocMatrix& m, std::size_t c) { return m.cols[c]; }

}  // namespace

TEST_CASE("diag(3,2,1) at rank 2 has exact top factors") {
  const TermDocMatrix m = diagonal_matrix({3.0, 2.0, 1.0});
  const TrainResult trained = train_lsi(m, SvdOptions{2, 42, 10, 2});
  REQUIRE(trained.model.rank() == 2);
  CHECK(trained.model.singular_values[0] == Approx(3.0).epsilon(1e-10));
  CHECK(trained.model.singular_values[1] == Approx(2.0).epsilon(1e-10));
  // Sign normalization makes the columns +e1 and +e2.
  CHECK(trained.model.term_space(0, 0) == Approx(1.0).epsilon(1e-10));
  CHECK(trained.model.term_space(1, 1) == Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(trained.model.term_space(1, 0)) < 1e-10);
  CHECK(std::abs(trained.model.term_space(2, 1)) < 1e-10);
}

TEST_CASE("rank-1 matrix 5uv^T has singular value 5") {
  Eigen::Vector3d u(1.0, 2.0, 2.0);
  u /= u.norm();
  Eigen::Vector2d v(3.0, 4.0);
  v /= v.norm();
  TermDocMatrix m;
  m.rows = 3;
  for (int c = 0; c < 2; ++c) {
    SparseVector col;
    col.dim = 3;
    for (int r = 0; r < 3; ++r) {
      col.entries.emplace_back(static_cast<std::uint32_t>(r), 5.0 * u[r] * v[c]);
    }
    m.cols.push_back(col);
    m.col_pairs.emplace_back("s" + std::to_string(c), "t" + std::to_string(c));
  }
  const TrainResult trained = train_lsi(m, SvdOptions{1, 0, 8, 2});
  CHECK(trained.model.singular_values[0] == Approx(5.0).epsilon(1e-10));
}

TEST_CASE("train_lsi validates its inputs") {
  const TermDocMatrix m = diagonal_matrix({3.0, 2.0, 1.0});
  CHECK_THROWS_AS(train_lsi(m, SvdOptions{0, 0, 8, 2}), std::runtime_error);
  CHECK_THROWS_AS(train_lsi(m, SvdOptions{4, 0, 8, 2}), std::runtime_error);
  const TermDocMatrix zero = diagonal_matrix({0.0, 0.0});
  CHECK_THROWS_AS(train_lsi(zero, SvdOptions{1, 0, 8, 2}), std::runtime_error);
}

TEST_CASE("factors are orthonormal with a descending spectrum") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const TermDocMatrix m = random_sparse(40, 25, 0.25, 1000 + seed);
    const TrainResult trained = train_lsi(m, SvdOptions{6, seed, 20, 2});
    const Eigen::MatrixXd gram =
        trained.model.term_space.transpose() * trained.model.term_space;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(6, 6);
    CHECK((gram - eye).cwiseAbs().maxCoeff() <= 1e-6);
    for (int i = 0; i + 1 < 6; ++i) {
      CHECK(trained.model.singular_values[i] >= trained.model.singular_values[i + 1]);
      CHECK(trained.model.singular_values[i] >= 0.0);
    }
  }
}

TEST_CASE("residual stays within 5% of the best rank-r error") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const TermDocMatrix m = random_sparse(40, 25, 0.3, 2000 + seed);
    const Eigen::MatrixXd dense = oracles::to_dense(m);
    const oracles::DenseSvd exact = oracles::dense_svd(dense);
    const std::uint32_t r = 5;
    double best_sq = 0.0;
    for (Eigen::Index i = r; i < exact.s.size(); ++i) best_sq += exact.s[i] * exact.s[i];
    const double best = std::sqrt(best_sq);

    const TrainResult trained = train_lsi(m, SvdOptions{r, seed, 20, 2});
    const double got = reconstruction_residual(m, trained);
    CHECK(got <= best * 1.05 + 1e-9);
  }
}

TEST_CASE("residual never grows when the rank increases") {
  const TermDocMatrix m = random_sparse(30, 20, 0.3, 77);
  double prev = std::numeric_limits<double>::infinity();
  for (std::uint32_t r = 2; r <= 10; r += 2) {
    const TrainResult trained = train_lsi(m, SvdOptions{r, 5, 20, 2});
    const double resid = reconstruction_residual(m, trained);
    CHECK(resid <= prev + 1e-9);
    prev = resid;
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  const TermDocMatrix m = random_sparse(30, 20, 0.3, 123);
  const TrainResult a = train_lsi(m, SvdOptions{4, 9, 12, 2});
  const TrainResult b = train_lsi(m, SvdOptions{4, 9, 12, 2});
  CHECK((a.model.term_space - b.model.term_space).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.model.singular_values - b.model.singular_values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("fold-in reproduces the document factor on an exact fixture") {
  // Full effective rank: the sketch captures the whole column space, so the
  // decomposition is exact and fold-in must return D' rows.
  const TermDocMatrix m = random_sparse(30, 8, 0.5, 31);
  const TrainResult trained = train_lsi(m, SvdOptions{8, 3, 20, 2});

  // Independent route: Eigen's dense SVD.
  const oracles::DenseSvd exact = oracles::dense_svd(oracles::to_dense(m));
  for (int j = 0; j < 8; ++j) {
    CHECK(trained.model.singular_values[j] == Approx(exact.s[j]).epsilon(1e-9));
  }

  for (std::size_t i = 0; i < m.cols.size(); ++i) {
    const Embedding folded = fold_in(column_of(m, i), trained.model);

    // Trainer's own document factor.
    const Eigen::VectorXd own = trained.doc_space.row(static_cast<Eigen::Index>(i));
    CHECK((folded - own).norm() <= 1e-8 * own.norm());

    // Oracle factor, sign-aligned per column via the term factors.
    Eigen::VectorXd oracle_row = exact.v.row(static_cast<Eigen::Index>(i));
    for (int j = 0; j < 8; ++j) {
      const double sign =
          trained.model.term_space.col(j).dot(exact.u.col(j)) < 0.0 ? -1.0 : 1.0;
      oracle_row[j] *= sign;
    }
    CHECK((folded - oracle_row).norm() <= 1e-8 * oracle_row.norm());
  }
}

TEST_CASE("fold_in is linear and handles edge cases") {
  const TermDocMatrix m = random_sparse(20, 10, 0.4, 8);
  const TrainResult trained = train_lsi(m, SvdOptions{4, 1, 10, 2});

  SparseVector zero;
  zero.dim = 20;
  CHECK(fold_in(zero, trained.model).norm() == 0.0);

  SparseVector q = column_of(m, 3);
  const Embedding base = fold_in(q, trained.model);
  SparseVector scaled = q;
  for (auto& [row, w] : scaled.entries) w *= 2.5;
  const Embedding scaled_emb = fold_in(scaled, trained.model);
  CHECK((scaled_emb - 2.5 * base).norm() <= 1e-12 * base.norm());

  SparseVector wrong_dim = q;
  wrong_dim.dim = 19;
  CHECK_THROWS_AS(fold_in(wrong_dim, trained.model), std::runtime_error);

  LsiModel degenerate = trained.model;
  degenerate.singular_values[3] = 0.0;
  CHECK_THROWS_WITH_AS(fold_in(q, degenerate), doctest::Contains("rank"),
                       std::runtime_error);
}

TEST_CASE("cosines of singular-value-scaled embeddings match the D'S' geometry") {
  const TermDocMatrix m = random_sparse(25, 10, 0.4, 55);
  const TrainResult trained = train_lsi(m, SvdOptions{5, 2, 15, 2});
  const Eigen::MatrixXd ds =
      trained.doc_space * trained.model.singular_values.asDiagonal();
  const Eigen::MatrixXd gram = ds * ds.transpose();  // D'S'S'D'^T
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.rows(); ++j) {
      const Embedding a = ds.row(i);
      const Embedding b = ds.row(j);
      const auto cos_ab = lsalign::cosine(a, b);
      REQUIRE(cos_ab);
      const double expected = gram(i, j) / (ds.row(i).norm() * ds.row(j).norm());
      CHECK(*cos_ab == Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("model files round-trip bit for bit") {
  testutil::TempDir tmp("lsi");
  const TermDocMatrix m = random_sparse(20, 10, 0.4, 21);
  TrainResult trained = train_lsi(m, SvdOptions{3, 6, 10, 2});
  trained.model.vocab_fingerprint.fill(0xAB);
  const std::string path = tmp.file("model.bin");
  trained.model.save(path);

  const LsiModel loaded = LsiModel::load(path);
  CHECK(loaded.rank() == 3);
  CHECK(loaded.term_rows() == 20);
  CHECK((loaded.term_space - trained.model.term_space).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.singular_values - trained.model.singular_values).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(loaded.vocab_fingerprint == trained.model.vocab_fingerprint);

  const std::string copy = tmp.file("copy.bin");
  loaded.save(copy);
  CHECK(testutil::read_file(path) == testutil::read_file(copy));

  SUBCASE("bad magic is rejected") {
    const std::string bad = tmp.file("bad.bin");
    testutil::write_file(bad, "NOPE" + std::string(100, '\0'));
    CHECK_THROWS_WITH_AS(LsiModel::load(bad), doctest::Contains("magic"),
                         std::runtime_error);
  }
  SUBCASE("truncation is detected") {
    const std::string cut = tmp.file("cut.bin");
    const std::string full = testutil::read_file(path);
    testutil::write_file(cut, full.substr(0, full.size() / 2));
    CHECK_THROWS_AS(LsiModel::load(cut), std::runtime_error);
  }
}

TEST_CASE("embed_corpus maps every document and respects the fingerprint") {
  const Corpus corpus(std::vector<Document>{
      {"t.com", "en", "e1", "alpha beta"},
      {"t.com", "en", "e2", "alpha gamma"},
      {"t.com", "en", "e3", "alpha beta"},
      {"t.com", "fr", "f1", "un deux"},
      {"t.com", "fr", "f2", "un trois"},
      {"z.com", "en", "z1", "same"},
      {"z.com", "en", "z2", "same"},
  });
  const Vocabulary vocab = Vocabulary::build(corpus);
  const IdfTable idf = IdfTable::build(corpus);
  PairList pairs;
  pairs.pairs = {{"e1", "f1"}, {"e2", "f2"}};
  TrainResult trained = train_lsi(build_term_doc_matrix(corpus, pairs, vocab, idf),
                                  SvdOptions{2, 11, 10, 2});
  trained.model.vocab_fingerprint = vocab.fingerprint();

  for (const EmbeddingScaling scaling :
       {EmbeddingScaling::kSingularValues, EmbeddingScaling::kNone}) {
    const std::vector<Embedding> embeddings =
        embed_corpus(corpus, trained.model, vocab, idf, scaling);
    REQUIRE(embeddings.size() == corpus.size());
    for (const Embedding& e : embeddings) {
      REQUIRE(e.size() == 2);
      CHECK(e.allFinite());
    }
    // Same text, domain and language embed identically.
    CHECK((embeddings[0] - embeddings[2]).norm() == 0.0);
    // Tokens with zero idf everywhere produce the zero embedding.
    CHECK(embeddings[5].norm() == 0.0);
    CHECK(embeddings[6].norm() == 0.0);
  }

  // Scaled and raw embeddings differ by exactly S'.
  const auto scaled = embed_corpus(corpus, trained.model, vocab, idf,
                                   EmbeddingScaling::kSingularValues);
  const auto raw = embed_corpus(corpus, trained.model, vocab, idf, EmbeddingScaling::kNone);
  const Eigen::VectorXd recovered =
      raw[0].cwiseProduct(trained.model.singular_values);
  CHECK((scaled[0] - recovered).norm() <= 1e-12);

  // Multi-threaded embedding gives identical vectors.
  const auto threaded = embed_corpus(corpus, trained.model, vocab, idf,
                                     EmbeddingScaling::kSingularValues, 4);
  for (std::size_t i = 0; i < threaded.size(); ++i) {
    CHECK((threaded[i] - scaled[i]).norm() == 0.0);
  }

  LsiModel mismatched = trained.model;
  mismatched.vocab_fingerprint[0] ^= 0xFF;
  CHECK_THROWS_WITH_AS(embed_corpus(corpus, mismatched, vocab, idf),
                       doctest::Contains("fingerprint"), std::runtime_error);
}

TEST_CASE("model file layout is pinned byte for byte") {
  testutil::TempDir tmp("lsi");
  LsiModel model;
  model.term_space.resize(2, 1);
  model.term_space << 1.0, 0.5;
  model.singular_values.resize(1);
  model.singular_values << 2.0;
  for (std::size_t i = 0; i < 32; ++i) {
    model.vocab_fingerprint[i] = static_cast<std::uint8_t>(i);
  }
  const std::string path = tmp.file("tiny.bin");
  model.save(path);

  const std::string bytes = testutil::read_file(path);
  REQUIRE(bytes.size() == 4 + 4 + 4 + 2 * 8 + 8 + 32);
  CHECK(bytes.substr(0, 4) == "LSI1");
  // m = 2 and r = 1 as little-endian u32.
  CHECK(bytes.substr(4, 4) == std::string("\x02\x00\x00\x00", 4));
  CHECK(bytes.substr(8, 4) == std::string("\x01\x00\x00\x00", 4));
  // Column-major f64: 1.0, 0.5, then S' = 2.0, little-endian IEEE 754.
  CHECK(bytes.substr(12, 8) == std::string("\x00\x00\x00\x00\x00\x00\xf0\x3f", 8));
  CHECK(bytes.substr(20, 8) == std::string("\x00\x00\x00\x00\x00\x00\xe0\x3f", 8));
  CHECK(bytes.substr(28, 8) == std::string("\x00\x00\x00\x00\x00\x00\x00\x40", 8));
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(static_cast<std::uint8_t>(bytes[36 + i]) == i);
  }
}
