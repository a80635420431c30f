#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "supergrid/matrix.hpp"

namespace supergrid::fixtures {

/// 58 countries x 9 years of donation rates with one missing cell.
LabeledMatrix organ58(std::uint64_t seed);
/// Symmetric cosine similarity matrix of `words` synthetic words drawn
/// around `topics` latent directions.
LabeledMatrix word_similarity(std::size_t topics, std::size_t words_per_topic, std::uint64_t seed);
/// 35 words in 5 topics (named words).
LabeledMatrix word35(std::uint64_t seed);
/// 60 words in 12 topics.
LabeledMatrix word60(std::uint64_t seed);
/// 120 x 200 response matrix with a two-by-two block structure.
LabeledMatrix voxel(std::uint64_t seed);
/// 30 points in three tight blobs on a triangle of side 10 around the origin.
LabeledMatrix blobs3(std::uint64_t seed);

struct FixtureFile {
  std::string name;
  std::string content;
};

/// Every bundled data file and config, ready to be written into one directory.
std::vector<FixtureFile> bundled(std::uint64_t seed);

}  // namespace supergrid::fixtures
