#include <gtest/gtest.h>

#include <sstream>

#include "splitgrow/census_io.hpp"
#include "splitgrow/errors.hpp"

using namespace splitgrow;

TEST(CensusBinary, LittleEndianLayout) {
  Census c{5, {0, 3, 1, 1}, 8.0};
  std::ostringstream out;
  write_census_binary(out, c);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 8u + 4u + 3u * 8u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[0]), 5);
  for (int i = 1; i < 8; ++i) EXPECT_EQ(bytes[static_cast<std::size_t>(i)], 0);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 3);  // K
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 3);  // n_1
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 1);  // n_2
}

TEST(CensusBinary, RoundTripConcatenated) {
  Census a{7, {0, 4, 2, 0, 1}, 0.0};
  Census b{1u << 20, {0, 600000, 200000, 100000, 48575, 1}, 0.0};
  std::stringstream io;
  write_census_binary(io, a);
  write_census_binary(io, b);
  Census r;
  ASSERT_TRUE(read_census_binary(io, r));
  EXPECT_EQ(r.t, a.t);
  EXPECT_EQ(r.counts, a.counts);
  ASSERT_TRUE(read_census_binary(io, r));
  EXPECT_EQ(r.t, b.t);
  EXPECT_EQ(r.counts, b.counts);
  EXPECT_FALSE(read_census_binary(io, r));
}

TEST(CensusBinary, TruncatedRecordThrows) {
  std::ostringstream out;
  write_census_binary(out, Census{3, {0, 2, 1}, 0.0});
  std::string bytes = out.str();
  bytes.pop_back();
  std::istringstream in(bytes);
  Census r;
  EXPECT_THROW(read_census_binary(in, r), Error);
}

TEST(CensusCsv, RowsWithPrefix) {
  std::ostringstream out;
  write_census_csv_rows(out, Census{4, {0, 2, 2}, 0.0}, "3,");
  EXPECT_EQ(out.str(), "3,4,1,2\n3,4,2,2\n");
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(2.0 / 3), "0.6666666666666666");
  EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
}
