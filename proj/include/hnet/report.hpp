#pragma once

#include <string>
#include <string_view>

#include "hnet/error.hpp"
#include "hnet/graph.hpp"

namespace hnet {

inline constexpr std::string_view kGraphPlaceholder = "__HNET_GRAPH_JSON__";

/// Fills a viewer template with the graph's GraphJson. `</` is escaped so the
/// payload cannot terminate its <script> element.
inline std::string render_html(const NetworkGraph& g, std::string_view html_template) {
  const auto pos = html_template.find(kGraphPlaceholder);
  if (pos == std::string_view::npos) throw Error(ErrorCode::InvalidConfig, "viewer template has no graph placeholder");
  std::string payload;
  for (char c : to_graph_json(g).dump()) {
    if (c == '/' && !payload.empty() && payload.back() == '<') payload += '\\';
    payload += c;
  }
  std::string out;
  out.reserve(html_template.size() + payload.size());
  out.append(html_template.substr(0, pos));
  out.append(payload);
  out.append(html_template.substr(pos + kGraphPlaceholder.size()));
  return out;
}

}  // namespace hnet
