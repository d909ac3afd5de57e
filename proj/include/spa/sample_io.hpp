#pragma once

// Single-column CSV input: one value per line, optional header line "x".
// Blank lines are ignored; a line containing a comma is rejected.

#include "spa/cgf.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace spa {

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Sample parse_sample_csv(std::string_view text);
Sample load_sample_csv(const std::string& path);

}  // namespace spa
