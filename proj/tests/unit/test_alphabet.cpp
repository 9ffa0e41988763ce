///////////////////////////////////////////////////////////////////////
// (C) Copyright 2026, The Scribe Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
///////////////////////////////////////////////////////////////////////

#include <gtest/gtest.h>

#include "scribe/alphabet.hpp"
#include "scribe/errors.hpp"
#include "scribe/permutation.hpp"

namespace scribe {
namespace {

TEST(Alphabet, Utf8RoundTrip) {
  const std::string text = "añb€😀";
  const auto decoded = utf8_decode(text);
  EXPECT_EQ(decoded.size(), 5u);
  EXPECT_EQ(utf8_encode(decoded), text);
  EXPECT_THROW(utf8_decode(std::string("\xC3")), InvalidArgument);
}

TEST(Alphabet, ReservedIdsFollowCharacters) {
  const auto a = Alphabet::from_utf8("cab");
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.sos(), 3);
  EXPECT_EQ(a.eos(), 4);
  EXPECT_EQ(a.pad(), 5);
  EXPECT_EQ(a.token_vocabulary(), 6);
  EXPECT_EQ(a.ctc_classes(), 4);
  EXPECT_EQ(Alphabet::ctc_class(0), 1);
  EXPECT_EQ(Alphabet::ctc_char(1), 0);
}

TEST(Alphabet, EncodeDecode) {
  const auto a = Alphabet::from_utf8("abc");
  const auto ids = a.encode("cab");
  EXPECT_EQ(a.decode(ids), "cab");
  EXPECT_THROW(a.encode("abd"), InvalidArgument);
  EXPECT_THROW(Alphabet::from_utf8("aa"), InvalidArgument);
}

TEST(Permutation, RankBijectionOverFourPieces) {
  std::vector<bool> seen(24, false);
  for (std::int64_t r = 0; r < 24; ++r) {
    const auto p = perm_unrank(4, r);
    ASSERT_TRUE(is_permutation_of_iota(p));
    EXPECT_EQ(perm_rank(p), r);
    seen[static_cast<std::size_t>(r)] = true;
  }
  for (bool s : seen) EXPECT_TRUE(s);
  EXPECT_EQ(perm_unrank(4, 0), (Permutation{0, 1, 2, 3}));
  EXPECT_EQ(perm_unrank(4, 23), (Permutation{3, 2, 1, 0}));
  EXPECT_THROW(perm_unrank(4, 24), InvalidArgument);
}

TEST(Permutation, Factorials) {
  EXPECT_EQ(factorial(0), 1);
  EXPECT_EQ(factorial(4), 24);
  EXPECT_EQ(factorial(6), 720);
}

}  // namespace
}  // namespace scribe
