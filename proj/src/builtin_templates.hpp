#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace halcor {

// (file stem, source text) for every templates/*.tmpl, embedded at build time.
const std::vector<std::pair<std::string_view, std::string_view>>& builtin_template_sources();

}  // namespace halcor
