// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "infoveil/error.hpp"
#include "infoveil/unicode.hpp"

namespace infoveil {

/// Place names resolved to ISO-3166 alpha-2 country codes.
///
/// Resolution picks the longest name that occurs in the location text on
/// word boundaries (case-insensitive); equal lengths prefer a country name
/// over a city, then the earlier position in the text.
class Gazetteer {
public:
  enum class Kind { country = 0, city = 1 };

  struct Entry {
    std::string name;  // normalised
    std::string code;
    Kind kind = Kind::country;
  };

  void add(std::string_view name, std::string code, Kind kind) {
    auto words = normalize(name);
    if (words.empty()) return;
    std::string key = join(words);
    max_words_ = std::max(max_words_, words.size());
    auto it = entries_.find(key);
    if (it == entries_.end() || kind < it->second.kind) entries_[key] = Entry{key, std::move(code), kind};
  }

  std::optional<Entry> resolve(std::string_view location) const {
    auto words = normalize(location);
    std::optional<Entry> best;
    std::size_t best_len = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::string key;
      for (std::size_t n = 1; n <= max_words_ && i + n <= words.size(); ++n) {
        if (n > 1) key += ' ';
        key += words[i + n - 1];
        auto it = entries_.find(key);
        if (it == entries_.end()) continue;
        auto len = unicode::length(key);
        if (!best || len > best_len || (len == best_len && it->second.kind < best->kind)) {
          best = it->second;
          best_len = len;
        }
      }
    }
    return best;
  }

  std::size_t size() const { return entries_.size(); }

  /// Lines of "name|CC|country" or "name|CC|city"; '#' starts a comment.
  static Gazetteer parse(std::istream& in) {
    Gazetteer g;
    g.load(in);
    return g;
  }

  /// Adds the lines of `in` (same format as parse) to this gazetteer.
  void load(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      std::vector<std::string> parts;
      std::stringstream ss(line);
      std::string part;
      while (std::getline(ss, part, '|')) parts.push_back(part);
      if (parts.size() < 2) throw Error(ErrorCode::validation, "bad gazetteer line '" + line + "'");
      auto trim = [](std::string s) {
        auto x = s.find_first_not_of(" \t\r");
        auto y = s.find_last_not_of(" \t\r");
        return x == std::string::npos ? std::string{} : s.substr(x, y - x + 1);
      };
      Kind kind = parts.size() > 2 && trim(parts[2]) == "city" ? Kind::city : Kind::country;
      add(trim(parts[0]), trim(parts[1]), kind);
    }
  }

  static const Gazetteer& builtin();

private:
  static std::vector<std::string> normalize(std::string_view text) {
    std::vector<std::string> words;
    std::string cur;
    std::size_t pos = 0;
    while (pos < text.size()) {
      char32_t c = unicode::fold(unicode::next_code_point(text, pos));
      if (unicode::is_alnum(c)) {
        unicode::append_utf8(cur, c);
      } else if (!cur.empty()) {
        words.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
  }

  static std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return out;
  }

  std::map<std::string, Entry> entries_;
  std::size_t max_words_ = 1;
};

inline constexpr std::string_view builtin_gazetteer_text = R"(
afghanistan|AF
albania|AL
algeria|DZ
argentina|AR
armenia|AM
australia|AU
austria|AT
azerbaijan|AZ
bangladesh|BD
belarus|BY
belgium|BE
bolivia|BO
bosnia|BA
bosnia and herzegovina|BA
brazil|BR
brasil|BR
bulgaria|BG
cambodia|KH
canada|CA
chile|CL
china|CN
colombia|CO
costa rica|CR
croatia|HR
cuba|CU
cyprus|CY
czech republic|CZ
czechia|CZ
denmark|DK
dominican republic|DO
ecuador|EC
egypt|EG
el salvador|SV
estonia|EE
ethiopia|ET
finland|FI
france|FR
georgia|GE
germany|DE
deutschland|DE
ghana|GH
greece|GR
guatemala|GT
honduras|HN
hong kong|HK
hungary|HU
iceland|IS
india|IN
indonesia|ID
iran|IR
iraq|IQ
ireland|IE
republic of ireland|IE
israel|IL
italy|IT
italia|IT
jamaica|JM
japan|JP
jordan|JO
kazakhstan|KZ
kenya|KE
kosovo|XK
latvia|LV
lebanon|LB
lithuania|LT
luxembourg|LU
malaysia|MY
malta|MT
mexico|MX
moldova|MD
mongolia|MN
montenegro|ME
morocco|MA
nepal|NP
netherlands|NL
the netherlands|NL
holland|NL
new zealand|NZ
nicaragua|NI
nigeria|NG
north macedonia|MK
macedonia|MK
norway|NO
pakistan|PK
panama|PA
paraguay|PY
peru|PE
philippines|PH
poland|PL
portugal|PT
puerto rico|PR
qatar|QA
romania|RO
russia|RU
russian federation|RU
saudi arabia|SA
scotland|GB
serbia|RS
singapore|SG
slovakia|SK
slovenia|SI
south africa|ZA
south korea|KR
korea|KR
spain|ES
espana|ES
españa|ES
sri lanka|LK
sweden|SE
sverige|SE
switzerland|CH
taiwan|TW
thailand|TH
tunisia|TN
turkey|TR
ukraine|UA
united arab emirates|AE
uae|AE
united kingdom|GB
uk|GB
great britain|GB
britain|GB
england|GB
wales|GB
northern ireland|GB
united states|US
united states of america|US
usa|US
us|US
america|US
uruguay|UY
venezuela|VE
vietnam|VN
viet nam|VN
zimbabwe|ZW
london|GB|city
manchester|GB|city
birmingham|GB|city
glasgow|GB|city
edinburgh|GB|city
liverpool|GB|city
leeds|GB|city
bristol|GB|city
cardiff|GB|city
belfast|GB|city
dublin|IE|city
cork|IE|city
new york|US|city
nyc|US|city
los angeles|US|city
san francisco|US|city
chicago|US|city
seattle|US|city
portland|US|city
boston|US|city
miami|US|city
austin|US|city
denver|US|city
atlanta|US|city
texas|US|city
california|US|city
florida|US|city
ohio|US|city
oregon|US|city
washington|US|city
toronto|CA|city
vancouver|CA|city
montreal|CA|city
ottawa|CA|city
calgary|CA|city
ontario|CA|city
quebec|CA|city
british columbia|CA|city
sydney|AU|city
melbourne|AU|city
brisbane|AU|city
perth|AU|city
adelaide|AU|city
canberra|AU|city
queensland|AU|city
new south wales|AU|city
victoria|AU|city
auckland|NZ|city
wellington|NZ|city
christchurch|NZ|city
amsterdam|NL|city
rotterdam|NL|city
utrecht|NL|city
berlin|DE|city
hamburg|DE|city
munich|DE|city
cologne|DE|city
frankfurt|DE|city
paris|FR|city
lyon|FR|city
marseille|FR|city
brussels|BE|city
antwerp|BE|city
stockholm|SE|city
gothenburg|SE|city
malmo|SE|city
malmö|SE|city
oslo|NO|city
bergen|NO|city
copenhagen|DK|city
helsinki|FI|city
reykjavik|IS|city
madrid|ES|city
barcelona|ES|city
lisbon|PT|city
rome|IT|city
milan|IT|city
vienna|AT|city
zurich|CH|city
geneva|CH|city
prague|CZ|city
warsaw|PL|city
krakow|PL|city
budapest|HU|city
bucharest|RO|city
athens|GR|city
moscow|RU|city
saint petersburg|RU|city
st petersburg|RU|city
kyiv|UA|city
kiev|UA|city
tel aviv|IL|city
istanbul|TR|city
tokyo|JP|city
beijing|CN|city
shanghai|CN|city
mumbai|IN|city
delhi|IN|city
bangkok|TH|city
manila|PH|city
jakarta|ID|city
johannesburg|ZA|city
cape town|ZA|city
sao paulo|BR|city
são paulo|BR|city
rio de janeiro|BR|city
buenos aires|AR|city
mexico city|MX|city
santiago|CL|city
lima|PE|city
bogota|CO|city
)";

inline const Gazetteer& Gazetteer::builtin() {
  static const Gazetteer g = [] {
    std::istringstream in{std::string(builtin_gazetteer_text)};
    return parse(in);
  }();
  return g;
}

}  // namespace infoveil
