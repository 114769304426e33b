#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace elicit::csv {

// Splits one record on commas. Fields wrapped in double quotes may contain
// commas; a doubled quote inside them stands for one quote character.
std::vector<std::string> split_record(std::string_view line);

// Quotes the field only when it contains a comma, quote or newline.
std::string quote_field(std::string_view field);

std::string join_record(const std::vector<std::string>& fields);

}  // namespace elicit::csv
