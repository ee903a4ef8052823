#pragma once

#include <string>
#include <string_view>

namespace crowdspan {

// Best-effort article text from HTML. Block elements become line breaks,
// script/style/comment content is dropped, entities are decoded, runs of
// spaces collapse, and invalid UTF-8 is replaced with U+FFFD. Never throws.
std::string ingest_html(std::string_view html);

// Decodes named and numeric character references in plain text.
std::string decode_entities(std::string_view text);

}  // namespace crowdspan
