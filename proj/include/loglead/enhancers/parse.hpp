#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "loglead/core/column.hpp"
#include "loglead/enhancers/drain.hpp"
#include "loglead/enhancers/lenma.hpp"
#include "loglead/enhancers/masking.hpp"
#include "loglead/enhancers/spell.hpp"
#include "loglead/enhancers/template_store.hpp"

namespace loglead {

template <class P>
concept TemplateParser = requires(P p, std::string_view msg, std::span<const std::string_view> toks) {
  { p.add_message(msg) } -> std::same_as<std::int64_t>;
  { p.add_tokens(toks) } -> std::same_as<std::int64_t>;
  { p.store() } -> std::same_as<const TemplateStore&>;
};

struct ParseResult {
  Int64Column event_ids;
  TemplateStore store;
};

/// Streams a message column through a parser (state carries over between
/// calls). With `masker`, each message is normalized inside the loop before
/// tokenization, the way a parser with built-in masking would do it.
template <TemplateParser Parser>
Int64Column parse_column(Parser& parser, const TextColumn& messages, const InlineMasker* masker = nullptr) {
  Int64Column ids;
  ids.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (messages.is_null(i)) {
      ids.push_null();
    } else if (masker != nullptr) {
      ids.push_back(parser.add_message((*masker)(messages[i])));
    } else {
      ids.push_back(parser.add_message(messages[i]));
    }
  }
  return ids;
}

template <TemplateParser Parser, class Config>
ParseResult parse_with(const TextColumn& messages, const Config& config) {
  Parser parser(config);
  auto ids = parse_column(parser, messages);
  return {std::move(ids), parser.store()};
}

inline ParseResult drain_parse(const TextColumn& messages, const DrainConfig& config = {}) {
  return parse_with<DrainParser>(messages, config);
}

inline ParseResult spell_parse(const TextColumn& messages, const SpellConfig& config = {}) {
  return parse_with<SpellParser>(messages, config);
}

inline ParseResult lenma_parse(const TextColumn& messages, const LenmaConfig& config = {}) {
  return parse_with<LenmaParser>(messages, config);
}

}  // namespace loglead
