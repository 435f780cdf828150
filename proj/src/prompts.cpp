#include "kgreason/prompts.hpp"

#include <algorithm>

#include "kgreason/error.hpp"

namespace kgreason {

namespace {

constexpr std::string_view kMarkerOpen = "<<<<";
constexpr std::string_view kMarkerClose = ">>>>";

// ---------------------------------------------------------------------------
// Claim verification

const char* const kSegmentationPreamble =
    R"PROMPT(Please divide the given sentence into several sentences each of which can be represented by one triplet. The generated sentences should be numbered and formatted as follows: #(number). (sentence), (entity set). The entity set for each sentence should contain no more than two entities, with each entity being used only once in all statements. The '##' symbol should be used to indicate an entity set. In the generated sentences, there cannot be more than two entities in the entity set. (i.e., the number of ## must not be larger than two.)

Examples)
)PROMPT";

const char* const kSegmentationQuery = R"PROMPT(Your Task)
Sentence:  <<<<CLAIM>>>>
Entity set: <<<<ENTITY_SET>>>>
--> Divided:)PROMPT";

const std::vector<std::string> kClaimSegmentationExamples = {
    R"PROMPT(Sentence A: Ahmad Kadhim Assad's club is Al-Zawra'a SC.
Entity set: ['Ahmad_Kadhim_Assad' ## "Al-Zawra'a_SC"]
--> Divided:
1. Ahmad Kadhim Assad's club is Al-Zawra'a SC., Entity set: ['Ahmad_Kadhim_Assad' ## "Al-Zawra'a_SC"])PROMPT",
    R"PROMPT(Sentence B: Aarhus Airport is operated by Aarhus Lufthavn A/S and has a runway length of 2776.0.
Entity set: ['Aarhus_Airport' ## 'Aarhus_Lufthavn_A/S' ## '2776.0']
--> Divided:
1. Aarhus Airport is operated by Aarhus Lufthavn A/S., Entity set: ['Aarhus_Airport' ## 'Aarhus_Lufthavn_A/S']
2. Aarhus Airport has a runway length of 2776.0., Entity set: ['Aarhus_Airport' ## '2776.0'])PROMPT",
    R"PROMPT(Sentence C: A person was born in the county of Maryland and graduated from the Massachusetts Institute of Technology.
Entity set: ['Maryland' ## 'Massachusetts_Institute_of_Technology']
--> Divided:
1. A person was born in the county of Maryland., Entity set: ['person' ## 'Maryland']
2. The person graduated from the Massachusetts Institute of Technology., Entity set: ['person' ## 'Massachusetts_Institute_of_Technology'])PROMPT",
    R"PROMPT(Sentence D: Alan Shepard had a spouse.
Entity set: ['Alan_Shepard']
--> Divided:
1. Alan Shepard had a spouse., Entity set: ['Alan_Shepard'])PROMPT",
    R"PROMPT(Sentence E: It is not true that Ayam penyet is from Java.
Entity set: ['Ayam_penyet' ## 'Java']
--> Divided:
1. Ayam penyet is not from Java., Entity set: ['Ayam_penyet' ## 'Java'])PROMPT",
    R"PROMPT(Sentence F: I heard that the leader of the country where Bakso comes from is Joko Widodo.
Entity set: ['Bakso' ## 'Joko_Widodo']
--> Divided:
1. Bakso comes from a country., Entity set: ['Bakso' ## 'country']
2. The leader of the country is Joko Widodo., Entity set: ['country' ## 'Joko_Widodo'])PROMPT",
    R"PROMPT(Sentence G: The Acharya Institute of Technology was established in 2000 and is affiliated with Visvesvaraya Technological University.
Entity set: ['Acharya_Institute_of_Technology' ## '2000' ## 'Visvesvaraya_Technological_University']
--> Divided:
1. The Acharya Institute of Technology was established in 2000., Entity set: ['Acharya_Institute_of_Technology' ## '2000']
2. The Acharya Institute of Technology is affiliated with Visvesvaraya Technological University., Entity set: ['Acharya_Institute_of_Technology' ## 'Visvesvaraya_Technological_University'])PROMPT",
    R"PROMPT(Sentence H: The band that Aaron Turner plays for is from Boston.
Entity set: ['Aaron_Turner' ## 'Boston']
--> Divided:
1. Aaron Turner plays for a band., Entity set: ['Aaron_Turner' ## 'band']
2. The band is from Boston., Entity set: ['band' ## 'Boston'])PROMPT",
    R"PROMPT(Sentence I: Bacon Explosion's main ingredient is sausage.
Entity set: ['Bacon_Explosion' ## 'Sausage']
--> Divided:
1. Bacon Explosion's main ingredient is sausage., Entity set: ['Bacon_Explosion' ## 'Sausage'])PROMPT",
    R"PROMPT(Sentence J: Abner W. Sibal, who served in the Army, was succeeded by Donald J. Irwin.
Entity set: ['Abner_W._Sibal' ## 'United_States_Army' ## 'Donald_J._Irwin']
--> Divided:
1. Abner W. Sibal served in the Army., Entity set: ['Abner_W._Sibal' ## 'United_States_Army']
2. Abner W. Sibal was succeeded by Donald J. Irwin., Entity set: ['Abner_W._Sibal' ## 'Donald_J._Irwin'])PROMPT",
    R"PROMPT(Sentence K: Bill Oddie's daughter was not born in Rochdale.
Entity set: ['Bill_Oddie' ## 'Rochdale']
--> Divided:
1. Bill Oddie has a daughter., Entity set: ['Bill_Oddie' ## 'daughter']
2. The daughter was not born in Rochdale., Entity set: ['daughter' ## 'Rochdale'])PROMPT",
    R"PROMPT(Sentence L: An academic journal with code IJPHDE is also Acta Math. Hungar.
Entity set: ["Acta Math. Hungar." ## "IJPHDE"]
--> Divided:
1. An academic journal is with code IJPHDE., Entity set: ['academic journal' ## "IJPHDE"]
2. An academic journal is also Acta Math. Hungar., Entity set: ['academic journal' ## "Acta Math. Hungar."])PROMPT",
};

const char* const kRetrievalPreamble = R"PROMPT(I will give you a set of words.
Find the top <<<<TOP_K>>>> elements from Words set which are most semantically related to the given sentence.
You may select up to <<<<TOP_K>>>> words. If there is nothing that looks semantically related, pick out any <<<<TOP_K>>>> elements and give them to me.

Examples)
)PROMPT";

const char* const kRetrievalQuery = R"PROMPT(Now let's find the top <<<<TOP_K>>>> elements.
Sentence: <<<<SENTENCE>>>>
Words set: <<<<RELATION_SET>>>>
Top <<<<TOP_K>>>> Answer:)PROMPT";

const std::vector<std::string> kRetrievalExamples = {
    R"PROMPT(Sentence A: Ahmad Kadhim Assad's club is Al-Zawra'a SC.
Words set: ['club', 'clubs', 'parent', 'spouse', 'birthPlace', 'deathYear', 'leaderName', 'awards', 'award', 'vicepresident', 'vicePresident']
Top 2 Answer: ['club', 'clubs'])PROMPT",
    R"PROMPT(Sentence B: Aarhus Airport is operated by Aarhus Lufthavn A/S.
Words set: ['operator', 'operatingOrganisation', 'location', 'runwayLength', 'elevationAboveTheSeaLevel', 'cityServed', 'runwayName']
Top 2 Answer: ['operatingOrganisation', 'operator'])PROMPT",
    R"PROMPT(Sentence C: A person was born in the county of Maryland.
Words set: ['birthPlace', 'deathPlace', 'country', 'largestCity', 'capital', 'placeOfBirth', 'state']
Top 2 Answer: ['birthPlace', 'placeOfBirth'])PROMPT",
    R"PROMPT(Sentence D: Alan Shepard had a spouse.
Words set: ['almaMater', 'spouse', 'awards', 'birthDate', 'nationality', 'occupation', 'status', 'selection']
Top 2 Answer: ['spouse'])PROMPT",
    R"PROMPT(Sentence E: Ayam penyet is not from Java.
Words set: ['country', 'region', 'ingredient', 'mainIngredient', 'servingTemperature', 'course']
Top 2 Answer: ['region', 'country'])PROMPT",
    R"PROMPT(Sentence F: The leader of the country is Joko Widodo.
Words set: ['leader', 'leaderName', 'capital', 'currency', 'language', 'ethnicGroup', 'anthem']
Top 2 Answer: ['leader', 'leaderName'])PROMPT",
    R"PROMPT(Sentence G: The Acharya Institute of Technology was established in 2000.
Words set: ['established', 'city', 'state', 'affiliation', 'director', 'numberOfPostgraduateStudents', 'motto']
Top 2 Answer: ['established'])PROMPT",
    R"PROMPT(Sentence H: Aaron Turner plays for a band.
Words set: ['associatedBand', 'associatedMusicalArtist', 'genre', 'instrument', 'origin', 'activeYearsStartYear']
Top 2 Answer: ['associatedBand', 'associatedMusicalArtist'])PROMPT",
    R"PROMPT(Sentence I: Bacon Explosion's main ingredient is sausage.
Words set: ['mainIngredient', 'ingredient', 'country', 'course', 'region']
Top 2 Answer: ['mainIngredient', 'ingredient'])PROMPT",
    R"PROMPT(Sentence J: Abner W. Sibal was succeeded by Donald J. Irwin.
Words set: ['successor', 'predecessor', 'office', 'militaryBranch', 'birthPlace', 'party']
Top 2 Answer: ['successor', 'predecessor'])PROMPT",
    R"PROMPT(Sentence K: The daughter was not born in Rochdale.
Words set: ['birthPlace', 'deathPlace', 'hometown', 'child', 'relative', 'almaMater']
Top 2 Answer: ['birthPlace', 'hometown'])PROMPT",
    R"PROMPT(Sentence L: An academic journal with code IJPHDE is also Acta Math. Hungar.
Words set: ['abbreviation', 'placeOfBirth', 'owner', 'coden', 'almaMater', 'dean', 'coach', 'writer', 'firstAired', 'director', 'formerTeam', 'starring', 'birthPlace']
Top 2 Answer: ['abbreviation', 'coden'])PROMPT",
};

const char* const kVerificationPreamble =
    R"PROMPT(You should verify the claim based on the evidence set.
Each evidence is in the form of [head, relation, tail] and it means "head's relation is tail.".

Verify the claim based on the evidence set. (True means that everything contained in the claim is supported by the evidence.)

Please note that the unit is not important. (e.g. "98400" is also same as 98.4kg)
Choose one of {True, False}, and give me the one-sentence evidence.

Examples)

)PROMPT";

const char* const kVerificationQuery =
    R"PROMPT(Now let's verify the Claim based on the Evidence set.
Claim: <<<<CLAIM>>>>
Evidence set: <<<<EVIDENCE_SET>>>>
Answer:)PROMPT";

const std::vector<std::string> kVerificationExamples = {
    R"PROMPT(Claim A: Ahmad Kadhim Assad's club is Al-Zawra'a SC.
Evidence set: [['Ahamad_Kadhim', 'clubs', "Al-Zawra'a SC"]]
Answer: True, based on the evidence set, Ahmad Kadhim Assad's club is Al-Zawra'a SC.)PROMPT",
    R"PROMPT(Claim B: Aarhus Airport is operated by Aarhus Lufthavn A/S and has a runway length of 2776.0.
Evidence set: [['Aarhus_Airport', 'operatingOrganisation', 'Aarhus_Lufthavn_A/S'], ['Aarhus_Airport', 'runwayLength', '2776.0']]
Answer: True, Aarhus Airport is operated by Aarhus Lufthavn A/S and its runway length is 2776.0.)PROMPT",
    R"PROMPT(Claim C: A person was born in the county of Maryland and graduated from the Massachusetts Institute of Technology.
Evidence set: [['Buzz_Aldrin', 'birthPlace', 'Glen_Ridge,_New_Jersey'], ['Buzz_Aldrin', 'almaMater', 'Massachusetts_Institute_of_Technology']]
Answer: False, the person who graduated from the Massachusetts Institute of Technology was born in New Jersey, not Maryland.)PROMPT",
    R"PROMPT(Claim D: Alan Shepard had a spouse.
Evidence set: [['Alan_Shepard', 'spouse', 'Louise_Brewer']]
Answer: True, Alan Shepard's spouse is Louise Brewer.)PROMPT",
    R"PROMPT(Claim E: It is not true that Ayam penyet is from Java.
Evidence set: [['Ayam_penyet', 'region', 'Java']]
Answer: False, the evidence shows that Ayam penyet is from Java.)PROMPT",
    R"PROMPT(Claim F: I heard that the leader of the country where Bakso comes from is Joko Widodo.
Evidence set: [['Bakso', 'country', 'Indonesia'], ['Indonesia', 'leader', 'Joko_Widodo']]
Answer: True, Bakso comes from Indonesia, whose leader is Joko Widodo.)PROMPT",
    R"PROMPT(Claim G: The Acharya Institute of Technology was established in 2000 and is affiliated with Visvesvaraya Technological University.
Evidence set: [['Acharya_Institute_of_Technology', 'established', '2000'], ['Acharya_Institute_of_Technology', 'affiliation', 'Visvesvaraya_Technological_University']]
Answer: True, both the establishment year and the affiliation match the evidence.)PROMPT",
    R"PROMPT(Claim H: The band that Aaron Turner plays for is from Boston.
Evidence set: [['Aaron_Turner', 'associatedBand', 'Isis_(band)'], ['Isis_(band)', 'origin', 'Boston']]
Answer: True, Aaron Turner played for Isis, which is from Boston.)PROMPT",
    R"PROMPT(Claim I: Bacon Explosion's main ingredient is sausage.
Evidence set: [['Bacon_Explosion', 'mainIngredient', 'Bacon,sausage']]
Answer: True, the main ingredients of Bacon Explosion include sausage.)PROMPT",
    R"PROMPT(Claim J: Abner W. Sibal, who served in the Army, was succeeded by Donald J. Irwin.
Evidence set: [['Abner_W._Sibal', 'militaryBranch', 'United_States_Army'], ['Abner_W._Sibal', 'successor', 'Donald_J._Irwin']]
Answer: True, Abner W. Sibal served in the United States Army and his successor was Donald J. Irwin.)PROMPT",
    R"PROMPT(Claim K: Bill Oddie's daughter was not born in Rochdale.
Evidence set: [['Bill_Oddie', 'child', 'Kate_Hardie'], ['Kate_Hardie', 'birthPlace', 'London']]
Answer: True, Bill Oddie's daughter Kate Hardie was born in London, not Rochdale.)PROMPT",
    R"PROMPT(Claim L: The place, designed by Huseyin Butuner and Hilmi Guner, is located in a country, where the leader is Paul Nurse.
Evidence set: [["Baku_Turkish_Martyrs'_Memorial", 'designer', "Hüseyin Bütüner and Hilmi Güner"], ["Baku_Turkish_Martyrs'_Memorial", 'location', 'Azerbaijan']]
Answer: False, there is no evidence for Paul Nurse.)PROMPT",
};

// ---------------------------------------------------------------------------
// Question answering. Same segmentation instructions; questions as examples.

const std::vector<std::string> kQuestionSegmentationExamples = {
    R"PROMPT(Sentence A: what does [Helen Mack] star in?
Entity set: ['Helen Mack']
--> Divided:
1. Helen Mack stars in a movie., Entity set: ['Helen Mack' ## 'movie'])PROMPT",
    R"PROMPT(Sentence B: what is the main language in [Karate-Robo Zaborgar]?
Entity set: ['Karate-Robo Zaborgar']
--> Divided:
1. Karate-Robo Zaborgar is in a language., Entity set: ['Karate-Robo Zaborgar' ## 'language'])PROMPT",
    R"PROMPT(Sentence C: who is the writer of [Boyz n the Hood]?
Entity set: ['Boyz n the Hood']
--> Divided:
1. Boyz n the Hood is written by a writer., Entity set: ['Boyz n the Hood' ## 'writer'])PROMPT",
    R"PROMPT(Sentence D: who are movie co-directors of [Jerome Robbins]?
Entity set: ['Jerome Robbins']
--> Divided:
1. Jerome Robbins directed movies., Entity set: ['Jerome Robbins' ## 'movies']
2. The movies are directed by co-directors., Entity set: ['movies' ## 'co-directors'])PROMPT",
    R"PROMPT(Sentence E: what genres do the films starred by [Buster Keaton] fall under?
Entity set: ['Buster Keaton']
--> Divided:
1. Buster Keaton starred in films., Entity set: ['Buster Keaton' ## 'films']
2. The films fall under genres., Entity set: ['films' ## 'genres'])PROMPT",
    R"PROMPT(Sentence F: which films share the screenwriter with [King Arthur]?
Entity set: ['King Arthur']
--> Divided:
1. King Arthur is written by a screenwriter., Entity set: ['King Arthur' ## 'screenwriter']
2. The screenwriter wrote films., Entity set: ['screenwriter' ## 'films'])PROMPT",
    R"PROMPT(Sentence G: the films that share directors with the film [Catch Me If You Can] were in which languages?
Entity set: ['Catch Me If You Can']
--> Divided:
1. Catch Me If You Can is directed by directors., Entity set: ['Catch Me If You Can' ## 'directors']
2. The directors directed films., Entity set: ['directors' ## 'films']
3. The films were in languages., Entity set: ['films' ## 'languages'])PROMPT",
    R"PROMPT(Sentence H: who are the directors of the movies written by the writer of [She]?
Entity set: ['She']
--> Divided:
1. She is written by a writer., Entity set: ['She' ## 'writer']
2. The writer wrote movies., Entity set: ['writer' ## 'movies']
3. The movies are directed by directors., Entity set: ['movies' ## 'directors'])PROMPT",
    R"PROMPT(Sentence I: when did the movies release whose actors also appear in the movie [Operator 13]?
Entity set: ['Operator 13']
--> Divided:
1. Operator 13 has actors., Entity set: ['Operator 13' ## 'actors']
2. The actors appear in movies., Entity set: ['actors' ## 'movies']
3. The movies were released in years., Entity set: ['movies' ## 'years'])PROMPT",
    R"PROMPT(Sentence J: which words describe [The Terminator]?
Entity set: ['The Terminator']
--> Divided:
1. The Terminator is described by words., Entity set: ['The Terminator' ## 'words'])PROMPT",
    R"PROMPT(Sentence K: what are the release years of the films directed by [Sofia Coppola]?
Entity set: ['Sofia Coppola']
--> Divided:
1. Sofia Coppola directed films., Entity set: ['Sofia Coppola' ## 'films']
2. The films were released in years., Entity set: ['films' ## 'years'])PROMPT",
    R"PROMPT(Sentence L: what language is [Amélie] in?
Entity set: ['Amélie']
--> Divided:
1. Amélie is in a language., Entity set: ['Amélie' ## 'language'])PROMPT",
};

const char* const kAnswerPreamble =
    R"PROMPT(You should answer the question based on the evidence set.
Each evidence is in the form of [head, relation, tail] and it means "head's relation is tail.".

Answer the question with one entity from the evidence set.
Give only the entity that best answers the question.

Examples)

)PROMPT";

const char* const kAnswerQuery =
    R"PROMPT(Now let's answer the Question based on the Evidence set.
Question: <<<<CLAIM>>>>
Evidence set: <<<<EVIDENCE_SET>>>>
Answer:)PROMPT";

const std::vector<std::string> kAnswerExamples = {
    R"PROMPT(Question A: what does [Helen Mack] star in?
Evidence set: [['The Son of Kong', 'starred_actors', 'Helen Mack'], ['She', 'starred_actors', 'Helen Mack']]
Answer: The Son of Kong)PROMPT",
    R"PROMPT(Question B: what is the main language in [Karate-Robo Zaborgar]?
Evidence set: [['Karate-Robo Zaborgar', 'in_language', 'Japanese']]
Answer: Japanese)PROMPT",
    R"PROMPT(Question C: who is the writer of [Boyz n the Hood]?
Evidence set: [['Boyz n the Hood', 'written_by', 'John Singleton']]
Answer: John Singleton)PROMPT",
    R"PROMPT(Question D: who are movie co-directors of [Jerome Robbins]?
Evidence set: [['West Side Story', 'directed_by', 'Jerome Robbins'], ['West Side Story', 'directed_by', 'Robert Wise']]
Answer: Robert Wise)PROMPT",
    R"PROMPT(Question E: what genres do the films starred by [Buster Keaton] fall under?
Evidence set: [['The General', 'starred_actors', 'Buster Keaton'], ['The General', 'has_genre', 'Comedy']]
Answer: Comedy)PROMPT",
    R"PROMPT(Question F: which films share the screenwriter with [King Arthur]?
Evidence set: [['King Arthur', 'written_by', 'David Franzoni'], ['Gladiator', 'written_by', 'David Franzoni']]
Answer: Gladiator)PROMPT",
    R"PROMPT(Question G: the films that share directors with the film [Catch Me If You Can] were in which languages?
Evidence set: [['Catch Me If You Can', 'directed_by', 'Steven Spielberg'], ['Jaws', 'directed_by', 'Steven Spielberg'], ['Jaws', 'in_language', 'English']]
Answer: English)PROMPT",
    R"PROMPT(Question H: who are the directors of the movies written by the writer of [She]?
Evidence set: [['She', 'written_by', 'H. Rider Haggard'], ["King Solomon's Mines", 'written_by', 'H. Rider Haggard'], ["King Solomon's Mines", 'directed_by', 'Compton Bennett']]
Answer: Compton Bennett)PROMPT",
    R"PROMPT(Question I: when did the movies release whose actors also appear in the movie [Operator 13]?
Evidence set: [['Operator 13', 'starred_actors', 'Gary Cooper'], ['High Noon', 'starred_actors', 'Gary Cooper'], ['High Noon', 'release_year', '1952']]
Answer: 1952)PROMPT",
    R"PROMPT(Question J: which words describe [The Terminator]?
Evidence set: [['The Terminator', 'has_tags', 'james cameron'], ['The Terminator', 'has_tags', 'time travel']]
Answer: time travel)PROMPT",
    R"PROMPT(Question K: what are the release years of the films directed by [Sofia Coppola]?
Evidence set: [['Lost in Translation', 'directed_by', 'Sofia Coppola'], ['Lost in Translation', 'release_year', '2003']]
Answer: 2003)PROMPT",
    R"PROMPT(Question L: what language is [Amélie] in?
Evidence set: [['Amélie', 'in_language', 'French']]
Answer: French)PROMPT",
};

PromptTemplate make(std::string id, Stage stage, const char* preamble,
                    const std::vector<std::string>& examples, const char* query) {
  return PromptTemplate{std::move(id), stage, preamble, examples, query};
}

void scan_markers(std::string_view text, std::vector<std::string>& out) {
  std::size_t pos = 0;
  while ((pos = text.find(kMarkerOpen, pos)) != std::string_view::npos) {
    const auto close = text.find(kMarkerClose, pos + kMarkerOpen.size());
    if (close == std::string_view::npos) break;
    std::string name(text.substr(pos + kMarkerOpen.size(), close - pos - kMarkerOpen.size()));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
    pos = close + kMarkerClose.size();
  }
}

void substitute(std::string_view text, const Bindings& bindings, std::string& out) {
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find(kMarkerOpen, pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find(kMarkerClose, open + kMarkerOpen.size());
    if (close == std::string_view::npos) break;
    const auto name = text.substr(open + kMarkerOpen.size(), close - open - kMarkerOpen.size());
    auto it = bindings.find(name);
    if (it == bindings.end()) {
      throw RenderError(std::string(name), "no binding for placeholder " + std::string(name));
    }
    out.append(text.substr(pos, open - pos));
    out.append(it->second);
    pos = close + kMarkerClose.size();
  }
  out.append(text.substr(pos));
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Segmentation:
      return "segmentation";
    case Stage::RelationRetrieval:
      return "retrieval";
    case Stage::Inference:
      return "inference";
  }
  return "unknown";
}

Stage stage_from_string(std::string_view name) {
  if (name == "segmentation") return Stage::Segmentation;
  if (name == "retrieval" || name == "relation_retrieval") return Stage::RelationRetrieval;
  if (name == "inference") return Stage::Inference;
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> out;
  scan_markers(preamble, out);
  for (const auto& ex : examples) scan_markers(ex, out);
  scan_markers(query, out);
  return out;
}

const PromptTemplate& prompt_template(Task task, Stage stage) {
  static const PromptTemplate claim_segmentation =
      make("verification/segmentation", Stage::Segmentation, kSegmentationPreamble,
           kClaimSegmentationExamples, kSegmentationQuery);
  static const PromptTemplate question_segmentation =
      make("qa/segmentation", Stage::Segmentation, kSegmentationPreamble,
           kQuestionSegmentationExamples, kSegmentationQuery);
  static const PromptTemplate retrieval = make("retrieval", Stage::RelationRetrieval,
                                               kRetrievalPreamble, kRetrievalExamples,
                                               kRetrievalQuery);
  static const PromptTemplate verification =
      make("verification/inference", Stage::Inference, kVerificationPreamble,
           kVerificationExamples, kVerificationQuery);
  static const PromptTemplate answering = make("qa/inference", Stage::Inference, kAnswerPreamble,
                                               kAnswerExamples, kAnswerQuery);

  switch (stage) {
    case Stage::Segmentation:
      return task == Task::Verification ? claim_segmentation : question_segmentation;
    case Stage::RelationRetrieval:
      return retrieval;
    case Stage::Inference:
      return task == Task::Verification ? verification : answering;
  }
  throw ConfigError("unknown stage");
}

std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings, int shots) {
  if (shots < 1 || static_cast<std::size_t>(shots) > tmpl.examples.size()) {
    throw ConfigError("shot count " + std::to_string(shots) + " outside [1, " +
                      std::to_string(tmpl.examples.size()) + "] for template " + tmpl.id);
  }
  for (const auto& name : tmpl.placeholders()) {
    auto it = bindings.find(name);
    if (it == bindings.end()) {
      throw RenderError(name, "no binding for placeholder " + name + " in template " + tmpl.id);
    }
    if (it->second.find(kMarkerOpen) != std::string::npos) {
      throw RenderError(name, "value bound to " + name + " contains a placeholder marker");
    }
  }

  std::string out;
  substitute(tmpl.preamble, bindings, out);
  for (int i = 0; i < shots; ++i) {
    if (i > 0) out += "\n\n";
    substitute(tmpl.examples[static_cast<std::size_t>(i)], bindings, out);
  }
  out += "\n\n\n";
  substitute(tmpl.query, bindings, out);
  return out;
}

}  // namespace kgreason
