#pragma once

#include <string>
#include <vector>

namespace stratmob::nco {

/// 2-digit occupation group from the NCO-1968 classification.
struct Group {
    std::string code;
    std::string title;
};

/// The bundled NCO-1968 2-digit group table, in code order.
const std::vector<Group>& groups();

bool is_valid_code(const std::string& code);

/// Title for a code; empty string when unknown.
std::string title(const std::string& code);

}  // namespace stratmob::nco
