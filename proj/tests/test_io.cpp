#include "framelift/gabor.hpp"
#include "framelift/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace framelift;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("framelift_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Json, ExponentRoundTrip) {
  for (Exponent p : {Exponent(1.0), Exponent(2.5), Exponent::infinity()})
    EXPECT_EQ(exponent_from_json(json::parse(to_json(p).dump())), p);
  EXPECT_THROW(exponent_from_json(json("two")), FormatError);
  EXPECT_THROW(exponent_from_json(json(0.5)), std::exception);
}

TEST(Json, NonFiniteNumbersBecomeNull) {
  EXPECT_TRUE(number(std::numeric_limits<double>::infinity()).is_null());
  EXPECT_TRUE(number(std::nan("")).is_null());
  EXPECT_EQ(number(1.5).get<double>(), 1.5);
}

TEST(Json, MatrixRoundTripIsBitExact) {
  Rng rng(1);
  const Mat a = rng.complex_matrix(5, 3) * 1e-7 + Mat::Constant(5, 3, cplx(1.0 / 3.0, -2.0 / 7.0));
  const Mat b = matrix_from_json(json::parse(to_json(a).dump()));
  ASSERT_EQ(b.rows(), 5);
  ASSERT_EQ(b.cols(), 3);
  for (Index i = 0; i < 5; ++i)
    for (Index k = 0; k < 3; ++k) EXPECT_EQ(a(i, k), b(i, k));
}

TEST(Json, MatrixRejectsWrongCount) {
  json j = to_json(Mat(Mat::Identity(2, 2)));
  j["rows"] = 3;
  EXPECT_THROW(matrix_from_json(j), FormatError);
  EXPECT_THROW(matrix_from_json(json::array()), FormatError);
}

TEST(Json, WeightWithTorusIndexRoundTrip) {
  const TFLattice lat(16, 2, 4);
  const Weight w = Weight::polynomial(lat.index_set(), 1.5);
  const Weight back = weight_from_json(json::parse(to_json(w).dump()));
  ASSERT_EQ(back.size(), w.size());
  for (Index k = 0; k < w.size(); ++k) EXPECT_EQ(back[k], w[k]);
  ASSERT_TRUE(back.index_set());
  for (Index k = 0; k < w.size(); k += 5)
    for (Index l = 0; l < w.size(); l += 7) EXPECT_EQ(back.index_set()->distance(k, l), lat.index_set()->distance(k, l));
}

TEST(Json, WeightRejectsNonPositive) {
  EXPECT_THROW(weight_from_json(json{{"values", {1.0, 0.0}}}), PreconditionError);
  EXPECT_THROW(weight_from_json(json{{"values", "x"}}), FormatError);
}

TEST(Json, FrameRoundTripIsBitExact) {
  Rng rng(2);
  const Frame fr = random_frame(3, 7, rng);
  const std::string once = to_json(fr).dump();
  const Frame back = frame_from_json(json::parse(once));
  EXPECT_EQ(back.vectors(), fr.vectors());
  EXPECT_EQ(to_json(back).dump(), once);
}

TEST(Json, FrameRejectsMalformed) {
  json j = to_json(Frame::orthonormal_basis(2));
  j["vectors"][0].erase(0);
  EXPECT_THROW(frame_vectors_from_json(j), FormatError);
  json k = to_json(Frame::orthonormal_basis(2));
  k["count"] = 5;
  EXPECT_THROW(frame_vectors_from_json(k), FormatError);
  json z{{"dim", 2}, {"vectors", {{1, 0, 0, 0}, {0, 0, 0, 0}}}};
  EXPECT_THROW(frame_from_json(z), NotAFrameError);
}

TEST(Csv, MatrixRoundTripIsBitExact) {
  const fs::path dir = scratch("csv");
  Rng rng(3);
  const Mat a = rng.complex_matrix(4, 6) / 3.0;
  write_matrix_csv(dir / "m", a);
  EXPECT_TRUE(fs::exists(dir / "m_real.csv"));
  EXPECT_TRUE(fs::exists(dir / "m_imag.csv"));
  EXPECT_EQ(read_matrix_csv(dir / "m"), a);
  fs::remove_all(dir);
}

TEST(Csv, RejectsRaggedAndText) {
  const fs::path dir = scratch("bad");
  atomic_write(dir / "r_real.csv", "1,2\n3\n");
  atomic_write(dir / "r_imag.csv", "0,0\n0\n");
  EXPECT_THROW(read_matrix_csv(dir / "r"), FormatError);
  atomic_write(dir / "t_real.csv", "1,abc\n");
  atomic_write(dir / "t_imag.csv", "0,0\n");
  EXPECT_THROW(read_matrix_csv(dir / "t"), FormatError);
  fs::remove_all(dir);
}

TEST(Files, AtomicWriteLeavesNoTemporary) {
  const fs::path dir = scratch("atomic");
  atomic_write(dir / "a.txt", "first");
  atomic_write(dir / "a.txt", "second");
  EXPECT_EQ(read_file(dir / "a.txt"), "second");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
  EXPECT_THROW(atomic_write(dir / "missing" / "a.txt", "x"), IoError);
  EXPECT_THROW(read_file(dir / "nope"), IoError);
  fs::remove_all(dir);
}

TEST(Tables, ScalingCsvHeaderAndFailedRows) {
  ExperimentSeries s;
  s.kind = "gabor";
  SeriesEntry bad;
  bad.size = 16;
  bad.failure = "not a frame";
  s.entries.push_back(bad);
  const std::string csv = scaling_csv(s, {Exponent(2.0), Exponent::infinity()});
  EXPECT_EQ(csv, "size,p,weight,lower,upper,condition,verdict\n16,2,m,,,,fail\n16,inf,m,,,,fail\n");
  EXPECT_NE(scaling_dat(s).find("16 NaN NaN NaN"), std::string::npos);
}
