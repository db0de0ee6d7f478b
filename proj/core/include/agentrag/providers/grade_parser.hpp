#pragma once

#include <string>
#include <string_view>

#include "agentrag/providers/types.hpp"

namespace agentrag::providers {

/// Normalizes a grader reply to yes/no. Accepted forms, optionally wrapped in
/// a markdown code fence or inline backticks:
///   {"score": "yes"}            JSON with key score or binary_score
///   binary_score='no'           structured-output repr, optionally Name(...)
///   yes / NO / "yes"            bare token, case-insensitive
/// Anything else throws MalformedGrade.
BinaryGrade parse_binary_grade(std::string_view raw);

/// {"<key>": "yes"}, always accepted by parse_binary_grade.
std::string grade_to_json(BinaryGrade grade, std::string_view key = "score");

}  // namespace agentrag::providers
