// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace infoveil::wordlists {

// English function words. Used by the co-occurrence and neologism layers
// only; the term index itself keeps every token.
inline constexpr std::string_view stopwords_text = R"(
a about above across actually after afterwards again against ago all almost alone along already also although
always am among amongst an and another any anybody anyhow anyone anything anyway anywhere are around as at
away back be became because become becomes becoming been before beforehand behind being below beside besides
between beyond both but by can cannot could did do does doing done down during each eg either else elsewhere
enough etc even ever every everybody everyone everything everywhere except few first for former formerly from
further furthermore get gets getting go goes going gone got had has have having he hence her here hereafter
hereby herein hers herself him himself his how however ie if im in inc indeed instead into is it its itself
ive just keep last latter latterly least less let lets like ll made make many may me meanwhile might mine more
moreover most mostly much must my myself namely neither never nevertheless next no nobody none noone nor not
nothing now nowhere of off often on once one only onto or other others otherwise our ours ourselves out over
own per perhaps please put quite rather re really same say says seem seemed seeming seems several she should
since so some somebody somehow someone something sometime sometimes somewhat somewhere still such than that
thats the their theirs them themselves then thence there thereafter thereby therefore therein thereupon these
they thing things this those though through throughout thru thus to together too toward towards under
until up upon us used using ve very via was we well were what whatever when whence whenever where whereafter
whereas whereby wherein whereupon wherever whether which while whither who whoever whole whom whose why will
with within without would yet you your yours yourself yourselves yes yeah ok okay oh also dont doesnt didnt
isnt wasnt arent werent wont cant couldnt shouldnt wouldnt havent hasnt hadnt youre theyre were ill id youd
hes shes weve theyve youve lol im don doesn didn isn wasn aren weren won couldn shouldn wouldn haven hasn
hadn ain ma mightn mustn needn shan ought shall whilst upon unto amid via onto whenever lest till unless
versus vs via within yours nine eight seven six five four three two ten twenty hundred thousand million
first second third fourth fifth new old many much more most little lot lots bit really quite rather pretty
)";

// Frequent general-vocabulary words, combined with the stopwords to form the
// default background dictionary for neologism detection.
inline constexpr std::string_view common_words_text = R"(
able accept account act action add age agree air allow answer appear apply area arm art ask away baby bad bag
ball bank bar base bear beat beautiful bed believe benefit best better big bill black blood blue board body
book born box boy break bring brother build business buy call car care carry case catch cause center central
chance change charge check child choice church city claim class clear close cold college color come common
community company compare computer consider continue control cost country couple course court cover create
cup cut dark data daughter day dead deal death decade decide deep describe design detail develop die
difference different difficult dinner direction discover discuss doctor dog door dose dream drink drive drop
drug drugs early east easy eat effect effects else end energy enjoy enter entire environment evening event
evidence exactly example experience explain eye face fact fail fall family far fast father fear feel feeling
field fight figure fill film final find fine finger finish fire fish floor fly follow food foot force forget
form forum forward free friend front full fun future game garden general girl give glass good great green
ground group grow guess gun guy hair half hand hang happen happy hard head health hear heart heat heavy help
high history hit hold home hope hospital hot hotel hour hours house huge human hundred idea image imagine
important include increase information inside interest interesting issue job join keep kid kill kind kitchen
know knowledge land language large late later laugh law lay lead learn leave left leg level life light line
list listen live local long look lose loss love low machine main maintain major man manage market marriage
matter mean measure medical meet meeting member memory mention message method middle mind minute minutes
miss moment money month months morning mother move movie music name nation national natural nature near
nearly need network news nice night normal north note notice number offer office official open operation
order organization outside page pain paper parent part party pass past patient pay peace people percent
perfect person personal phone pick picture piece place plan plant play player point police policy poor
popular position possible post posts power prepare present president pressure price private probably problem
process produce product program provide public pull purpose push quality question quick quickly quiet race
radio raise range rate reach read ready real reason receive recent recently record red reduce region remain
remember remove report represent research respond rest result return reveal rich right rise risk road rock
role room rule run safe save scene school science sea season seat second see seek sell send sense serious
serve service set share short shot show side sign simple simply sing single sister sit site situation size
skill skin sleep small smile social society soldier son song soon sort sound source south space speak
special spend sport spring staff stage stand standard star start state stay step stop store story street
strong student study stuff style subject success suddenly suffer suggest summer support sure surface system
table take talk task tax teach teacher team tell term test thank thanks theory think thought thread threads
throw time today tonight top total tough town trade traditional training travel treat treatment tree trial
trip true truth try turn type understand unit usually value various view visit voice vote wait walk wall want
war watch water way weak wear week weeks weight west white wife win window wish woman wonder word words work
worker world worry write writer wrong yard year years young
)";

inline std::set<std::string> split_words(std::string_view text) {
  std::set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.insert(w);
  return out;
}

inline const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = split_words(stopwords_text);
  return words;
}

inline const std::set<std::string>& common_words() {
  static const std::set<std::string> words = split_words(common_words_text);
  return words;
}

/// Default background dictionary: common words plus stopwords.
inline const std::set<std::string>& background_dictionary() {
  static const std::set<std::string> words = [] {
    auto all = common_words();
    all.insert(stopwords().begin(), stopwords().end());
    return all;
  }();
  return words;
}

}  // namespace infoveil::wordlists
