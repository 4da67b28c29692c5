#pragma once

#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace cmfuse {

// A designating term after normalize_term(). Plain string alias: terms are
// compared by byte equality once normalized.
using Term = std::string;

inline constexpr std::string_view kOperationMarker = "()";

// NFC, case-folded, trimmed, inner whitespace runs collapsed to one space.
// A trailing "()" is kept and glued to the stem ("Lire ()" -> "lire()").
// Accents are preserved.
inline Term normalize_term(std::string_view raw) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text.foldCase(U_FOLD_CASE_DEFAULT);

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_SUCCESS(status)) {
    icu::UnicodeString composed = nfc->normalize(text, status);
    if (U_SUCCESS(status)) text = composed;
  }

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(u' '));
    pending_space = false;
    collapsed.append(c);
  }

  std::string out;
  collapsed.toUTF8String(out);
  if (out.size() >= kOperationMarker.size() && out.ends_with(kOperationMarker)) {
    std::string stem = out.substr(0, out.size() - kOperationMarker.size());
    while (!stem.empty() && stem.back() == ' ') stem.pop_back();
    out = stem + std::string(kOperationMarker);
  }
  return out;
}

inline bool has_operation_marker(std::string_view term) {
  return term.ends_with(kOperationMarker);
}

inline Term strip_operation_marker(std::string_view term) {
  if (has_operation_marker(term)) term.remove_suffix(kOperationMarker.size());
  return Term(term);
}

inline Term with_operation_marker(std::string_view term) {
  if (has_operation_marker(term)) return Term(term);
  return Term(term) + std::string(kOperationMarker);
}

// Number of code points; used for column alignment in text reports.
inline std::size_t display_width(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace cmfuse
