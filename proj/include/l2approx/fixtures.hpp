#pragma once

// Fixture files from the repository's fixtures/ directory, embedded at build
// time.

#include <map>
#include <string>
#include <vector>

namespace l2approx {

const std::map<std::string, std::string>& fixture_files();

// Contents of a named fixture; throws InvalidArgument when unknown.
const std::string& fixture(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace l2approx
