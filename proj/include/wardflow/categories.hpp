#ifndef WARDFLOW_CATEGORIES_HPP
#define WARDFLOW_CATEGORIES_HPP

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace wardflow {

/// The 58 venue categories counted as cultural (museums, galleries,
/// theatres, libraries, parks and the like). Order is stable; the synth
/// generator indexes into it.
const std::vector<std::string>& cultural_categories();

/// Everyday non-cultural categories used for the rest of the synthetic
/// venues. Disjoint from the cultural list.
const std::vector<std::string>& ordinary_categories();

std::set<std::string> cultural_category_set();

/// One category per line; blank lines and lines starting with '#' skipped.
std::set<std::string> load_categories(std::istream& in);

}  // namespace wardflow

#endif  // WARDFLOW_CATEGORIES_HPP
