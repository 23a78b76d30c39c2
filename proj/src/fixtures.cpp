#include "l2approx/fixtures.hpp"

#include "l2approx/errors.hpp"

namespace l2approx {

const std::string& fixture(const std::string& name) {
  const auto& files = fixture_files();
  auto it = files.find(name);
  if (it == files.end()) throw InvalidArgument("unknown fixture '" + name + "'");
  return it->second;
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& [name, body] : fixture_files()) names.push_back(name);
  return names;
}

}  // namespace l2approx
