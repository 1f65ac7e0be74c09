#include <fstream>

#include "atlas/error.hpp"
#include "atlas/text.hpp"

namespace atlas {

namespace {

constexpr const char* kEnglish[] = {
    "all", "six", "just", "less", "being", "indeed", "over", "move", "anyway", "four", "not",
    "own", "through", "using", "fify", "where", "mill", "only", "find", "before", "one",
    "whose", "system", "how", "somewhere", "much", "thick", "show", "had", "enough", "should",
    "to", "must", "whom", "seeming", "yourselves", "under", "ours", "two", "has", "might",
    "thereafter", "latterly", "do", "them", "his", "around", "than", "get", "very", "de",
    "none", "cannot", "every", "un", "they", "front", "during", "thus", "now", "him", "nor",
    "name", "regarding", "several", "hereafter", "did", "always", "who", "didn", "whither",
    "this", "someone", "either", "each", "become", "thereupon", "sometime", "side", "towards",
    "therein", "twelve", "because", "often", "ten", "our", "doing", "km", "eg", "some", "back",
    "used", "up", "go", "namely", "computer", "are", "further", "beyond", "ourselves", "yet",
    "out", "even", "will", "what", "still", "for", "bottom", "mine", "since", "please",
    "forty", "per", "its", "everything", "behind", "does", "various", "above", "between", "it",
    "neither", "seemed", "ever", "across", "she", "somehow", "be", "we", "full", "never",
    "sixty", "however", "here", "otherwise", "were", "whereupon", "nowhere", "although",
    "found", "alone", "re", "along", "quite", "fifteen", "by", "both", "about", "last",
    "would", "anything", "via", "many", "could", "thence", "put", "against", "keep", "etc",
    "amount", "became", "ltd", "hence", "onto", "or", "con", "among", "already", "co",
    "afterwards", "formerly", "within", "seems", "into", "others", "while", "whatever",
    "except", "down", "hers", "everyone", "done", "least", "another", "whoever", "moreover",
    "couldnt", "throughout", "anyhow", "yourself", "three", "from", "her", "few", "together",
    "top", "there", "due", "been", "next", "anyone", "eleven", "cry", "call", "therefore",
    "interest", "then", "thru", "themselves", "hundred", "really", "sincere", "empty", "more",
    "himself", "elsewhere", "mostly", "on", "fire", "am", "becoming", "hereby", "amongst",
    "else", "part", "everywhere", "too", "kg", "herself", "former", "those", "he", "me",
    "myself", "made", "twenty", "these", "was", "bill", "cant", "us", "until", "besides",
    "nevertheless", "below", "anywhere", "nine", "can", "whether", "of", "your", "toward",
    "my", "say", "something", "and", "whereafter", "whenever", "give", "almost", "wherever",
    "is", "describe", "beforehand", "herein", "doesn", "an", "as", "itself", "at", "have",
    "in", "seem", "whence", "ie", "any", "fill", "again", "hasnt", "inc", "thereby", "thin",
    "no", "perhaps", "latter", "meanwhile", "when", "detail", "same", "wherein", "beside",
    "also", "that", "other", "take", "which", "becomes", "you", "if", "nobody", "unless",
    "whereas", "see", "though", "may", "after", "upon", "most", "hereupon", "eight", "but",
    "serious", "nothing", "such", "why", "off", "a", "don", "whereby", "third", "i", "whole",
    "noone", "sometimes", "well", "amoungst", "yours", "their", "rather", "without", "so",
    "five", "the", "first", "with", "make", "quite", "once"};

}  // namespace

const StopWords& default_stopwords() {
  static const StopWords words(std::begin(kEnglish), std::end(kEnglish));
  return words;
}

StopWords load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw VocabularyError("cannot read stop-word file '" + path + "'");
  StopWords words;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    words.insert(to_lower_ascii(line.substr(begin, end - begin + 1)));
  }
  return words;
}

}  // namespace atlas
