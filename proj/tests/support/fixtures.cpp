#include "fixtures.hpp"

#include <algorithm>

namespace fixtures {

using namespace kgreason;

std::filesystem::path path(std::string_view name) {
  return std::filesystem::path(KGREASON_FIXTURE_DIR) / std::string(name);
}

namespace {

Loaded load(std::string_view graph, std::string_view types) {
  auto g = types.empty() ? load_graph(path(graph)) : load_graph(path(graph), path(types));
  auto tg = build_type_graph(g);
  return {std::move(g), std::move(tg)};
}

}  // namespace

const Loaded& factkg() {
  static const Loaded loaded = load("factkg_graph.tsv", "factkg_types.tsv");
  return loaded;
}

const Loaded& metaqa() {
  static const Loaded loaded = load("metaqa_kb.tsv", "");
  return loaded;
}

const Loaded& figure1() {
  static const Loaded loaded = load("figure1.tsv", "figure1_types.tsv");
  return loaded;
}

MockScript script(std::string_view name) { return MockScript::load(path(name)); }

MockScript first_k_script(std::string_view name) {
  auto entries = script(name).entries();
  std::erase_if(entries, [](const MockEntry& e) { return e.stage == Stage::RelationRetrieval; });
  entries.push_back({Stage::RelationRetrieval, MatchKind::FirstK, "", ""});
  return MockScript::from_entries(std::move(entries));
}

std::vector<GoldenCase> golden_cases() {
  const std::string claim = "Ahmad Kadhim Assad's club is Al-Zawra'a SC.";
  const std::string question = "what does [Helen Mack] star in?";
  return {
      {"verification_segmentation",
       Task::Verification,
       Stage::Segmentation,
       {{"CLAIM", claim}, {"ENTITY_SET", "['Ahmad_Kadhim_Assad' ## \"Al-Zawra'a_SC\"]"}}},
      {"retrieval",
       Task::Verification,
       Stage::RelationRetrieval,
       {{"SENTENCE", claim},
        {"RELATION_SET",
         "['club', 'clubs', 'parent', 'spouse', 'birthPlace', 'deathYear', 'leaderName', "
         "'awards', 'award', 'vicepresident', 'vicePresident']"},
        {"TOP_K", "2"}}},
      {"verification_inference",
       Task::Verification,
       Stage::Inference,
       {{"CLAIM", claim}, {"EVIDENCE_SET", "[['Ahamad_Kadhim', 'clubs', \"Al-Zawra'a SC\"]]"}}},
      {"qa_segmentation",
       Task::QuestionAnswering,
       Stage::Segmentation,
       {{"CLAIM", question}, {"ENTITY_SET", "['Helen Mack']"}}},
      {"qa_inference",
       Task::QuestionAnswering,
       Stage::Inference,
       {{"CLAIM", question},
        {"EVIDENCE_SET",
         "[['The Son of Kong', 'starred_actors', 'Helen Mack'], ['She', 'starred_actors', "
         "'Helen Mack']]"}}},
  };
}

std::filesystem::path golden_path(const GoldenCase& c, int shots) {
  return std::filesystem::path(KGREASON_GOLDEN_DIR) /
         (c.name + ".shots" + std::to_string(shots) + ".txt");
}

ExpectedQuery figure1_query() {
  return {"crew_members_two_hop",
          false,
          "William Anders, who graduated from AFIT, M.S. 1962, served as a crew member on an "
          "artificial satellite together with Frank Borman.",
          {"William_Anders", "AFIT, M.S. 1962", "Frank_Borman"},
          0,
          "multi-hop",
          "Supported",
          3,
          {{"Apollo_8", "crewMembers", "William_Anders"},
           {"William_Anders", "almaMater", "AFIT, M.S. 1962"},
           {"Apollo_8", "crewMembers", "Frank_Borman"}}};
}

std::vector<ExpectedQuery> verification_suite() {
  std::vector<ExpectedQuery> out;
  out.push_back(figure1_query());
  out.push_back({"club_one_hop",
                 false,
                 "Ahmad Kadhim Assad's club is Al-Zawra'a SC.",
                 {"Ahmad_Kadhim_Assad", "Al-Zawra'a_SC"},
                 0,
                 "one-hop",
                 "Supported",
                 1,
                 {{"Ahmad_Kadhim_Assad", "club", "Al-Zawra'a_SC"},
                  {"Ahmad_Kadhim_Assad", "clubs", "Al-Zawra'a_SC"}}});
  out.push_back({"airport_leader_conjunction",
                 false,
                 "Yes, Agra Airport is located in India where the leader is Narendra Modi.",
                 {"Agra_Airport", "India", "Narendra_Modi"},
                 0,
                 "conjunction",
                 "Supported",
                 2,
                 {{"Agra_Airport", "location", "India"},
                  {"India", "leader", "Narendra_Modi"},
                  {"India", "leaderName", "Narendra_Modi"},
                  {"Narendra_Modi", "birthPlace", "India"}}});
  out.push_back({"building_conjunction",
                 false,
                 "I wasn’t aware that 103 Colmore Row, located in Birmingham, with 23 floors, was "
                 "completed in 1976.",
                 {"103_Colmore_Row", "Birmingham", "23", "1976"},
                 0,
                 "conjunction",
                 "Supported",
                 3,
                 {{"103_Colmore_Row", "location", "Birmingham"},
                  {"103_Colmore_Row", "floorCount", "23"},
                  {"103_Colmore_Row", "completionDate", "1976"},
                  {"103_Colmore_Row", "buildingEndDate", "1976"}}});
  out.push_back({"death_city_multi_hop",
                 false,
                 "Alfredo Zitarrosa died in a city, Uruguay (which has Raul Fernando Sendic "
                 "Rodriguez as leader).",
                 {"Alfredo_Zitarrosa", "Uruguay", "Raúl_Fernando_Sendic_Rodríguez"},
                 0,
                 "multi-hop",
                 "Supported",
                 3,
                 {{"Alfredo_Zitarrosa", "deathPlace", "Uruguay"},
                  {"Alfredo_Zitarrosa", "birthPlace", "Uruguay"},
                  {"Montevideo", "country", "Uruguay"},
                  {"Alfredo_Zitarrosa", "deathPlace", "Montevideo"},
                  {"Alfredo_Zitarrosa", "birthPlace", "Montevideo"},
                  {"Uruguay", "capital", "Montevideo"},
                  {"Uruguay", "leader", "Raúl_Fernando_Sendic_Rodríguez"},
                  {"Uruguay", "leaderName", "Raúl_Fernando_Sendic_Rodríguez"}}});
  out.push_back({"air_base_negation",
                 false,
                 "Al-Taqaddum Air Base is located in Fallujah which is not in Iraq.",
                 {"Al-Taqaddum_Air_Base", "Fallujah", "Iraq"},
                 0,
                 "negation",
                 "Refuted",
                 2,
                 {{"Al-Taqaddum_Air_Base", "city", "Fallujah"},
                  {"Al-Taqaddum_Air_Base", "cityServed", "Fallujah"},
                  {"Fallujah", "country", "Iraq"}}});
  out.push_back({"manor_country_multi_hop",
                 false,
                 "A country is the location of the Adare Manor, is run by leader Enda Kenny and "
                 "the natives are Irish people.",
                 {"Adare_Manor", "Enda_Kenny", "Irish_people"},
                 0,
                 "multi-hop",
                 "Supported",
                 3,
                 {{"Adare_Manor", "country", "Republic_of_Ireland"},
                  {"Republic_of_Ireland", "leader", "Enda_Kenny"},
                  {"Republic_of_Ireland", "leaderName", "Enda_Kenny"},
                  {"Adare_Manor", "locationCountry", "Republic_of_Ireland"},
                  {"Republic_of_Ireland", "demonym", "Irish_people"}}});
  out.push_back({"ship_one_hop",
                 false,
                 "AIDAstella was built by Meyer Werft.",
                 {"AIDAstella", "Meyer_Werft"},
                 0,
                 "one-hop",
                 "Supported",
                 1,
                 {{"AIDAstella", "shipBuilder", "Meyer_Werft"}}});
  out.push_back({"ship_conjunction",
                 false,
                 "AIDA Cruise line operated the AIDAstella which was built by Meyer Werft.",
                 {"AIDA_Cruises", "AIDAstella", "Meyer_Werft"},
                 0,
                 "conjunction",
                 "Supported",
                 2,
                 {{"AIDAstella", "shipOperator", "AIDA_Cruises"},
                  {"AIDAstella", "shipBuilder", "Meyer_Werft"}}});
  out.push_back({"shipyard_existence",
                 false,
                 "Meyer Werft had a parent company.",
                 {"Meyer_Werft"},
                 0,
                 "existence",
                 "Supported",
                 1,
                 {{"Meyer_Werft", "parentCompany", "Meyer_Neptun_Group"}}});
  out.push_back({"ship_multi_hop",
                 false,
                 "AIDAstella was built by a company in Papenburg.",
                 {"AIDAstella", "Papenburg"},
                 0,
                 "multi-hop",
                 "Supported",
                 2,
                 {{"AIDAstella", "shipBuilder", "Meyer_Werft"},
                  {"Meyer_Werft", "location", "Papenburg"}}});
  out.push_back({"ship_negation",
                 false,
                 "AIDAstella was not built by Meyer Werft in Papenburg.",
                 {"AIDAstella", "Meyer_Werft", "Papenburg"},
                 0,
                 "negation",
                 "Refuted",
                 2,
                 {{"AIDAstella", "shipBuilder", "Meyer_Werft"},
                  {"Meyer_Werft", "location", "Papenburg"}}});
  return out;
}

std::vector<ExpectedQuery> qa_suite() {
  auto q = [](std::string name, int hops, std::string text, std::string answer,
              std::size_t subs, std::vector<LabelTriple> evidence) {
    ExpectedQuery e;
    e.name = std::move(name);
    e.question = true;
    e.text = std::move(text);
    e.hops = hops;
    e.expected = std::move(answer);
    e.subsentences = subs;
    e.evidence = std::move(evidence);
    return e;
  };
  return {
      q("actor_films", 1, "what films does [Brigitte Nielsen] appear in?", "Cobra", 1,
        {{"Cobra", "starred_actors", "Brigitte Nielsen"},
         {"Red Sonja", "starred_actors", "Brigitte Nielsen"}}),
      q("director_film_fallback", 1, "can you name a film directed by [Nikolai Müllerschön]?",
        "The Red Baron", 1, {{"The Red Baron", "directed_by", "Nikolai Müllerschön"}}),
      q("film_genre", 1, "what type of film is [Six Shooter]?", "Short", 1,
        {{"Six Shooter", "has_genre", "Short"}}),
      q("actor_release_year", 2,
        "when did the films starred by [Deborah Van Valkenburgh] release?", "1997", 2,
        {{"Mean Guns", "starred_actors", "Deborah Van Valkenburgh"},
         {"Mean Guns", "release_year", "1997"}}),
      q("same_director", 2, "which films have the same director of [The Duellists]?",
        "The Counselor", 2,
        {{"The Duellists", "directed_by", "Ridley Scott"},
         {"The Counselor", "directed_by", "Ridley Scott"}}),
      q("writer_genre", 2, "what genres are the movies written by [Robert Kenner] in?",
        "Documentary", 2,
        {{"Food, Inc.", "written_by", "Robert Kenner"}, {"Food, Inc.", "has_genre", "Documentary"}}),
      q("shared_writer_genre", 3,
        "what are the genres of the movies whose writers also wrote [The Lives of a Bengal "
        "Lancer]?",
        "Horror", 3,
        {{"The Lives of a Bengal Lancer", "written_by", "John L. Balderston"},
         {"Frankenstein", "written_by", "John L. Balderston"},
         {"Frankenstein", "has_genre", "Horror"}}),
      q("shared_actor_release_year", 3,
        "when did the movies starred by [Seeking Justice] actors release?", "2006", 3,
        {{"Seeking Justice", "starred_actors", "Nicolas Cage"},
         {"World Trade Center", "starred_actors", "Nicolas Cage"},
         {"World Trade Center", "release_year", "2006"}}),
      q("shared_actor_genre", 3,
        "what types are the movies starred by actors in [A Thin Line Between Love and Hate]?",
        "Comedy", 3,
        {{"A Thin Line Between Love and Hate", "directed_by", "Martin Lawrence"},
         {"Big Momma's House", "starred_actors", "Martin Lawrence"},
         {"Big Momma's House", "has_genre", "Comedy"},
         {"A Thin Line Between Love and Hate", "written_by", "Martin Lawrence"},
         {"A Thin Line Between Love and Hate", "starred_actors", "Martin Lawrence"}}),
  };
}

kgreason::Query to_query(const ExpectedQuery& e, const kgreason::KnowledgeGraph& g) {
  return e.question ? kgreason::make_question(g, e.text, e.hops)
                    : kgreason::make_claim(g, e.text, e.entities);
}

std::set<LabelTriple> evidence_labels(const kgreason::EvidenceGraph& ev,
                                      const kgreason::KnowledgeGraph& g) {
  std::set<LabelTriple> out;
  for (const auto& t : ev.triples) out.insert({g.label(t.head), g.label(t.relation), g.label(t.tail)});
  return out;
}

std::set<LabelTriple> as_set(const std::vector<LabelTriple>& triples) {
  return {triples.begin(), triples.end()};
}

}  // namespace fixtures
