#pragma once

#include <string_view>

// Catalog template names and their variables. Shared by the chains that
// render the prompts and the mock chat model that answers them.
namespace agentrag::prompt_names {

inline constexpr std::string_view kGradeDocument = "grade_document";          // document, question
inline constexpr std::string_view kAnswer = "answer";                          // question, context
inline constexpr std::string_view kRewriteQuestion = "rewrite_question";      // question
inline constexpr std::string_view kGradeHallucination = "grade_hallucination";  // documents, generation
inline constexpr std::string_view kGradeUsefulness = "grade_usefulness";      // question, generation

/// Reply of the QA chain when the context cannot answer the question.
inline constexpr std::string_view kNoInformation = "RAG does not have relevant information";

}  // namespace agentrag::prompt_names
