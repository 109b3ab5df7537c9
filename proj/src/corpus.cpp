#include "srr/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "srr/json_io.hpp"

namespace srr {

TemplateBanks default_template_banks() {
  TemplateBanks b;

  b.single_actions[EntityCategory::PhoneNumber] = {
      "call", "dial", "ring", "redial", "facetime", "place a call to",
      "make a quick call to", "give a call to", "send a text to", "text"};
  b.single_actions[EntityCategory::EmailAddress] = {
      "email", "mail", "send an email to", "write an email to",
      "draft an email to", "compose an email to", "send mail to", "reply to"};
  b.single_actions[EntityCategory::Url] = {
      "open", "visit", "browse", "bookmark", "open up", "check out"};
  b.single_actions[EntityCategory::Address] = {
      "navigate to", "get directions to", "drive to", "find directions to",
      "map out a route to", "navigate me to", "show directions to",
      "start navigation to"};
  b.single_actions[EntityCategory::DateTime] = {
      "add a reminder for", "set a reminder for", "add an event for",
      "block my calendar for", "schedule something for", "save the date for"};

  b.oblique_actions[EntityCategory::PhoneNumber] = {"patch me through to",
                                                    "give them a buzz at"};
  b.oblique_actions[EntityCategory::EmailAddress] = {"shoot a note over to",
                                                     "write to them at"};
  b.oblique_actions[EntityCategory::Url] = {"pull up", "bring up"};
  b.oblique_actions[EntityCategory::Address] = {"how far is",
                                                "meet me over at"};
  b.oblique_actions[EntityCategory::DateTime] = {"pencil in", "plan around"};

  b.multilabel_actions = {
      {"take me there", {EntityCategory::Url, EntityCategory::Address}},
      {"get me there", {EntityCategory::Url, EntityCategory::Address}},
      {"how do i get there", {EntityCategory::Url, EntityCategory::Address}},
      {"show me how to get there",
       {EntityCategory::Url, EntityCategory::Address}},
      {"reach out to them through that",
       {EntityCategory::PhoneNumber, EntityCategory::EmailAddress}},
      {"get in touch with them via that",
       {EntityCategory::PhoneNumber, EntityCategory::EmailAddress}},
      {"contact them using that",
       {EntityCategory::PhoneNumber, EntityCategory::EmailAddress}},
      {"use that to get in touch",
       {EntityCategory::PhoneNumber, EntityCategory::EmailAddress}},
  };

  b.specific_refs[EntityCategory::PhoneNumber] = {
      "this number",         "that number",       "this phone number",
      "that phone number",   "this contact number", "the number",
      "this contact",        "their number"};
  b.specific_refs[EntityCategory::EmailAddress] = {
      "this email",         "that email",          "this email address",
      "that email address", "the email",           "their email address"};
  b.specific_refs[EntityCategory::Url] = {
      "this link", "that link",    "this url",  "that url",
      "this website", "this page", "the link",  "that site"};
  b.specific_refs[EntityCategory::Address] = {
      "this address", "that address", "the address",
      "this location", "that location", "this street address"};
  b.specific_refs[EntityCategory::DateTime] = {
      "this date", "that date", "this time", "that time",
      "this event", "that appointment", "this meeting time"};

  b.generic_refs = {"this", "that", "it", "them", "this one", "that one"};
  b.prefixes = {"", "", "", "", "can you", "please", "could you",
                "i want to", "i need to"};
  b.tails = {"", "", "", "", "for me", "please", "right away", "now",
             "for PERSON", "when you can", "as soon as possible", "on DAY"};

  b.desc_verbs[EntityCategory::PhoneNumber] = {"call", "dial", "text", "ring"};
  b.desc_verbs[EntityCategory::EmailAddress] = {"email", "send an email to",
                                                "write to"};
  b.desc_verbs[EntityCategory::Url] = {"open", "visit", "bookmark",
                                       "check out"};
  b.desc_verbs[EntityCategory::Address] = {"navigate to", "get directions to",
                                           "drive to"};
  b.desc_verbs[EntityCategory::DateTime] = {"add", "save", "remember",
                                            "keep track of"};

  b.desc_nouns[EntityCategory::PhoneNumber] = {"number", "phone number"};
  b.desc_nouns[EntityCategory::EmailAddress] = {"email"};
  b.desc_nouns[EntityCategory::Url] = {"link", "website", "page", "web page"};
  b.desc_nouns[EntityCategory::Address] = {"address", "location",
                                           "street address"};
  b.desc_nouns[EntityCategory::DateTime] = {"date", "time", "time slot"};

  b.label_words[EntityCategory::PhoneNumber] = {
      "Support", "Sales", "Billing", "Office", "Reception",
      "Frontdesk", "Warranty", "Dispatch", "Concierge", "Helpdesk"};
  b.label_words[EntityCategory::EmailAddress] = {
      "Careers", "Press", "Returns", "Marketing", "Legal",
      "Admissions", "Wholesale", "Volunteers", "Editors", "Procurement"};
  b.label_words[EntityCategory::Url] = {
      "Blog", "Forum", "Shop", "Portal", "Wiki",
      "Gallery", "Newsletter", "Archive", "Tutorials", "Downloads"};
  b.label_words[EntityCategory::Address] = {
      "Warehouse", "Clinic", "Gym", "Studio", "Branch",
      "Depot", "Showroom", "Cafe", "Bakery", "Salon"};
  b.label_words[EntityCategory::DateTime] = {
      "Checkin", "Checkout", "Kickoff", "Deadline", "Review",
      "Orientation", "Launch", "Rehearsal", "Ceremony", "Workshop"};
  b.label_suffixes = {"desk", "team", "dept", "unit"};

  b.distractors = {"Welcome",
                   "Learn more",
                   "Read reviews",
                   "Trusted by thousands",
                   "Free shipping over fifty",
                   "New arrivals weekly",
                   "Customer stories",
                   "Our mission",
                   "Frequently asked questions",
                   "Limited offer ends soon",
                   "Members only",
                   "Follow us everywhere"};

  b.email_names = {"anna.reed",  "omar.khan",  "lena.fox",   "ravi.mehta",
                   "june.park",  "theo.wills", "ines.gomez", "kofi.mensah"};
  b.domains = {"acme",     "bluesky", "kitehill", "fernbrook", "lumina",
               "vextra",   "quanta",  "halcyon",  "nimbus",    "zephyr"};
  b.tlds = {"com", "org", "net", "io"};
  b.url_paths = {"pricing",  "specials", "handbook", "catalog",
                 "roadmap",  "manuals",  "brochure", "signup"};
  b.streets = {"Oakwood", "Birch",   "Cedar",    "Maple",    "Willow",
               "Juniper", "Hickory", "Alder",    "Sycamore", "Chestnut"};
  b.street_suffixes = {"Ave", "St", "Road", "Lane", "Blvd", "Drive"};
  b.weekdays = {"Monday", "Tuesday", "Wednesday", "Thursday",
                "Friday", "Saturday", "Sunday"};
  b.months = {"January", "February", "March",     "April",   "June",
              "July",    "August",   "September", "October", "November",
              "December"};
  return b;
}

GeneratorConfig load_generator_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open generator config: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  GeneratorConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("n_category_samples"))
    cfg.n_category_samples = j.at("n_category_samples").get<int>();
  if (j.contains("n_descriptive_screens"))
    cfg.n_descriptive_screens = j.at("n_descriptive_screens").get<int>();
  if (j.contains("requests_per_screen"))
    cfg.requests_per_screen = j.at("requests_per_screen").get<int>();
  if (j.contains("multilabel_fraction"))
    cfg.multilabel_fraction = j.at("multilabel_fraction").get<double>();
  if (j.contains("supervision_count"))
    cfg.supervision_count = j.at("supervision_count").get<int>();
  if (j.contains("conflict_fraction"))
    cfg.conflict_fraction = j.at("conflict_fraction").get<double>();
  if (j.contains("ref_mix")) {
    const auto& m = j.at("ref_mix");
    cfg.ref_mix.label = m.value("label", cfg.ref_mix.label);
    cfg.ref_mix.full_text = m.value("full_text", cfg.ref_mix.full_text);
    cfg.ref_mix.ordinal = m.value("ordinal", cfg.ref_mix.ordinal);
    cfg.ref_mix.partial_value =
        m.value("partial_value", cfg.ref_mix.partial_value);
  }
  if (j.contains("layout")) {
    const auto& l = j.at("layout");
    cfg.layout.screen_width = l.value("screen_width", cfg.layout.screen_width);
    cfg.layout.screen_height = l.value("screen_height", cfg.layout.screen_height);
    cfg.layout.rows = l.value("rows", cfg.layout.rows);
    cfg.layout.cols = l.value("cols", cfg.layout.cols);
  }
  return cfg;
}

std::vector<Entity> dummy_pool() {
  static const char* texts[kNumCategories] = {
      "555-0100", "user@example.com", "https://example.com",
      "1 Main St Springfield", "tomorrow 5pm"};
  std::vector<Entity> pool;
  for (int i = 0; i < kNumCategories; ++i) {
    pool.push_back(Entity{i, -1, texts[i], {0, 0, 0, 0}, kAllCategories[i]});
  }
  return pool;
}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

std::string join_parts(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
  return out;
}

int token_count(const std::string& phrase) {
  if (phrase.empty()) return 0;
  return static_cast<int>(tokenize(phrase).size());
}

// --------------------------------------------------------------------------
// Value grammars. partial_word must be screen-unique; callers own the
// used-word set.

using UsedWords = std::set<std::string>;

// Only the distinguishing tokens are kept unique; structural tokens like
// "www", "com", or "pm" repeat freely across a screen.
bool claim_words(UsedWords& used, const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (used.count(w)) return false;
  }
  for (const auto& w : words) used.insert(w);
  return true;
}

GeneratedValue gen_phone(Rng& rng, const TemplateBanks&, UsedWords& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    char buf[32];
    int area = 201 + static_cast<int>(rng.uniform(780));
    int last = static_cast<int>(rng.uniform(10000));
    switch (rng.uniform(4)) {
      case 0: std::snprintf(buf, sizeof buf, "(%03d) 555-%04d", area, last); break;
      case 1: std::snprintf(buf, sizeof buf, "%03d-555-%04d", area, last); break;
      case 2: std::snprintf(buf, sizeof buf, "1-8%02d-555-%04d",
                            static_cast<int>(rng.uniform(100)), last); break;
      default: std::snprintf(buf, sizeof buf, "+1 %03d 555 %04d", area, last); break;
    }
    char lastbuf[8];
    std::snprintf(lastbuf, sizeof lastbuf, "%04d", last);
    std::string word = lastbuf;
    if (!claim_words(used, {word})) continue;
    return {buf, word};
  }
  throw ExhaustedTemplatesError();
}

GeneratedValue gen_email(Rng& rng, const TemplateBanks& b, UsedWords& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::string& name = rng.pick(b.email_names);
    const std::string& domain = rng.pick(b.domains);
    const std::string& tld = rng.pick(b.tlds);
    std::vector<std::string> words = tokenize(name);
    words.push_back(domain);
    if (!claim_words(used, words)) continue;
    return {name + "@" + domain + "." + tld, domain};
  }
  throw ExhaustedTemplatesError();
}

GeneratedValue gen_url(Rng& rng, const TemplateBanks& b, UsedWords& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::string& domain = rng.pick(b.domains);
    const std::string& tld = rng.pick(b.tlds);
    std::vector<std::string> words = {domain};
    std::string text;
    switch (rng.uniform(3)) {
      case 0: text = "https://www." + domain + "." + tld; break;
      case 1: text = "www." + domain + "." + tld; break;
      default: {
        const std::string& path = rng.pick(b.url_paths);
        text = "https://www." + domain + "." + tld + "/" + path;
        words.push_back(path);
        break;
      }
    }
    if (!claim_words(used, words)) continue;
    return {text, domain};
  }
  throw ExhaustedTemplatesError();
}

GeneratedValue gen_address(Rng& rng, const TemplateBanks& b, UsedWords& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::string& street = rng.pick(b.streets);
    std::string key = lower(street);
    std::string number = std::to_string(1 + rng.uniform(998));
    if (!claim_words(used, {key, number})) continue;
    return {number + " " + street + " " + rng.pick(b.street_suffixes), key};
  }
  throw ExhaustedTemplatesError();
}

GeneratedValue gen_datetime(Rng& rng, const TemplateBanks& b, UsedWords& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::string text, word;
    char buf[32];
    switch (rng.uniform(3)) {
      case 0: {
        const std::string& day = rng.pick(b.weekdays);
        std::snprintf(buf, sizeof buf, "%d:%02d %s",
                      1 + static_cast<int>(rng.uniform(12)),
                      static_cast<int>(rng.uniform(60)),
                      rng.chance(0.5) ? "pm" : "am");
        text = day + " " + buf;
        word = lower(day);
        break;
      }
      case 1: {
        const std::string& month = rng.pick(b.months);
        text = month + " " + std::to_string(1 + rng.uniform(28));
        word = lower(month);
        break;
      }
      default: {
        int year = 2025 + static_cast<int>(rng.uniform(6));
        std::snprintf(buf, sizeof buf, "%d/%d/%d",
                      1 + static_cast<int>(rng.uniform(12)),
                      1 + static_cast<int>(rng.uniform(28)), year);
        text = buf;
        word = std::to_string(year);
        break;
      }
    }
    if (!claim_words(used, {word})) continue;
    return {text, word};
  }
  throw ExhaustedTemplatesError();
}

GeneratedValue gen_value(Rng& rng, EntityCategory cat, const TemplateBanks& b,
                         UsedWords& used) {
  switch (cat) {
    case EntityCategory::PhoneNumber: return gen_phone(rng, b, used);
    case EntityCategory::EmailAddress: return gen_email(rng, b, used);
    case EntityCategory::Url: return gen_url(rng, b, used);
    case EntityCategory::Address: return gen_address(rng, b, used);
    case EntityCategory::DateTime: return gen_datetime(rng, b, used);
  }
  throw ConfigError("unknown category");
}

// --------------------------------------------------------------------------
// Screen assembly

struct Cell {
  int row = 0;
  int col = 0;
};

BBox text_bbox(const Cell& cell, const LayoutSpec& layout, int line,
               std::size_t chars) {
  double cw = static_cast<double>(layout.screen_width) / layout.cols;
  double ch = static_cast<double>(layout.screen_height) / layout.rows;
  double w = std::min(cw - 30.0, 15.0 + 9.0 * static_cast<double>(chars));
  return BBox{cell.col * cw + 15.0, cell.row * ch + 22.0 + 40.0 * line, w, 28.0};
}

}  // namespace

namespace {

std::optional<GeneratedScreen> build_screen_once(Rng& rng,
                                                 const GeneratorConfig& config,
                                                 EntityCategory target_category,
                                                 int n_same_category) {
  if (n_same_category < 2) {
    throw std::invalid_argument("descriptive screens need >= 2 same-category entities");
  }
  const TemplateBanks& b = config.banks;
  const LayoutSpec& layout = config.layout;
  if (b.distractors.empty()) throw ConfigError("empty distractor bank");

  // Bottom row is banner-only; the two rows above it hold only
  // distractors so the banner stays far from every candidate.
  int entity_rows = layout.rows - 3;
  if (entity_rows < 1) throw LayoutOverflowError();
  bool conflict = rng.chance(config.conflict_fraction);

  GeneratedScreen out;
  out.target_category = target_category;
  Screen& scr = out.screen;
  scr.width = layout.screen_width;
  scr.height = layout.screen_height;

  std::vector<Cell> entity_cells;
  for (int r = 0; r < entity_rows; ++r) {
    for (int c = 0; c < layout.cols; ++c) entity_cells.push_back({r, c});
  }
  int n_other = static_cast<int>(rng.uniform(3));  // 0..2 other-category
  if (n_same_category + n_other > static_cast<int>(entity_cells.size())) {
    if (n_same_category > static_cast<int>(entity_cells.size())) {
      throw LayoutOverflowError();
    }
    n_other = static_cast<int>(entity_cells.size()) - n_same_category;
  }
  rng.shuffle(entity_cells);

  UsedWords used;
  std::set<std::string> used_label_words;
  int next_text_id = 0;

  // Entity ids are a random permutation so id order carries no category
  // or target information.
  std::vector<int> entity_ids(n_same_category + n_other);
  for (std::size_t i = 0; i < entity_ids.size(); ++i) {
    entity_ids[i] = static_cast<int>(i);
  }
  rng.shuffle(entity_ids);
  std::size_t placed = 0;

  // Banner first so it gets the smallest text id.
  std::string banner_word;
  int banner_text_id = -1;
  int conflict_idx =
      conflict ? static_cast<int>(rng.uniform(n_same_category)) : -1;
  if (conflict) {
    banner_word = rng.pick(b.label_words.at(target_category));
    banner_text_id = next_text_id;
    Cell banner_cell{layout.rows - 1, static_cast<int>(rng.uniform(layout.cols))};
    scr.ocr_texts.push_back(
        {next_text_id++, banner_word,
         text_bbox(banner_cell, layout, 0, banner_word.size())});
    used_label_words.insert(lower(banner_word));
  }

  auto place_entity = [&](EntityCategory cat, const Cell& cell,
                          bool is_conflict_target) {
    // Label: first word unique per screen (the banner word is reused for
    // the conflict target only).
    std::string first;
    if (is_conflict_target) {
      first = banner_word;
    } else {
      for (int attempt = 0;; ++attempt) {
        if (attempt >= 64) throw ExhaustedTemplatesError();
        first = rng.pick(b.label_words.at(cat));
        if (used_label_words.count(lower(first)) == 0) break;
      }
    }
    used_label_words.insert(lower(first));
    std::vector<std::string> label_tokens = {lower(first)};
    std::string label_text = first;
    if (!is_conflict_target && rng.chance(0.5) && !b.label_suffixes.empty()) {
      const std::string& suffix = rng.pick(b.label_suffixes);
      label_text += " " + suffix;
      label_tokens.push_back(lower(suffix));
    }
    scr.ocr_texts.push_back(
        {next_text_id++, label_text, text_bbox(cell, layout, 0, label_text.size())});

    GeneratedValue value = gen_value(rng, cat, b, used);
    BBox vb = text_bbox(cell, layout, 1, value.text.size());
    int value_text_id = next_text_id;
    scr.ocr_texts.push_back({next_text_id++, value.text, vb});
    Entity e{entity_ids[placed++], value_text_id, value.text, vb, cat};
    out.entity_labels[e.id] = label_tokens;
    out.partial_words[e.id] = value.partial_word;
    scr.entities.push_back(e);
    return e.id;
  };

  // Target-category entities; a random one is the conflict target when the
  // banner is planted (single-word label so the banner ties it exactly).
  std::size_t cell_idx = 0;
  for (int i = 0; i < n_same_category; ++i) {
    place_entity(target_category, entity_cells[cell_idx++],
                 conflict && i == conflict_idx);
  }
  std::vector<EntityCategory> others;
  for (EntityCategory c : kAllCategories) {
    if (c != target_category) others.push_back(c);
  }
  for (int i = 0; i < n_other; ++i) {
    place_entity(rng.pick(others), entity_cells[cell_idx++], false);
  }

  // Distractors: some leftover entity cells plus the two buffer rows.
  std::vector<Cell> distractor_cells;
  while (cell_idx < entity_cells.size() && distractor_cells.size() < 2) {
    distractor_cells.push_back(entity_cells[cell_idx++]);
  }
  for (int r = entity_rows; r < layout.rows - 1; ++r) {
    for (int c = 0; c < layout.cols; ++c) distractor_cells.push_back({r, c});
  }
  for (const auto& cell : distractor_cells) {
    const std::string& text = rng.pick(b.distractors);
    scr.ocr_texts.push_back(
        {next_text_id++, text, text_bbox(cell, layout, 0, text.size())});
  }

  // Screen id: content hash mixed with a fresh draw so equal layouts
  // still get distinct ids.
  std::uint64_t h = rng.next_u64();
  for (const auto& t : scr.ocr_texts) h = fnv1a(t.text, h);
  char idbuf[32];
  std::snprintf(idbuf, sizeof idbuf, "scr-%016llx",
                static_cast<unsigned long long>(h));
  scr.id = idbuf;

  // Target selection.
  if (conflict) {
    out.conflict_entity_id = entity_ids[conflict_idx];
    out.target_entity_id = entity_ids[conflict_idx];
  } else {
    out.target_entity_id =
        entity_ids[rng.uniform(static_cast<std::uint64_t>(n_same_category))];
  }

  // The banner must stay out of every candidate's neighbor window,
  // otherwise the text features see it too.
  if (conflict) {
    for (const auto& e : scr.entities) {
      std::vector<std::pair<double, int>> dists;
      for (const auto& t : scr.ocr_texts) {
        if (t.id == e.ocr_text_id) continue;
        dists.emplace_back(center_distance(t.bbox, e.bbox), t.id);
      }
      std::sort(dists.begin(), dists.end());
      for (int i = 0; i < 3 && i < static_cast<int>(dists.size()); ++i) {
        if (dists[i].second == banner_text_id) return std::nullopt;
      }
    }
  }
  return out;
}

}  // namespace

GeneratedScreen generate_screen_full(Rng& rng, const GeneratorConfig& config,
                                     EntityCategory target_category,
                                     int n_same_category) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng sub = rng.fork();
    auto gs = build_screen_once(sub, config, target_category, n_same_category);
    if (gs) return *gs;
  }
  throw ExhaustedTemplatesError();
}

Screen generate_screen(Rng& rng, const GeneratorConfig& config,
                       EntityCategory target_category, int n_same_category) {
  return generate_screen_full(rng, config, target_category, n_same_category)
      .screen;
}

namespace {

const std::vector<std::string> kOrdinalWords = {
    "first", "second", "third", "fourth", "fifth",
    "sixth", "seventh", "eighth", "ninth", "tenth"};

int reading_rank(const Screen& scr, const Entity& target) {
  std::vector<Entity> same;
  for (const auto& e : scr.entities) {
    if (e.category == target.category) same.push_back(e);
  }
  auto sorted = reading_order(same);
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    if (sorted[i].id == target.id) return i;
  }
  return -1;
}

}  // namespace

GeneratedSample generate_descriptive_sample(Rng& rng,
                                            const GeneratedScreen& gs,
                                            RefType ref_type,
                                            const GeneratorConfig& config,
                                            const std::string& request_id) {
  const TemplateBanks& b = config.banks;
  const Screen& scr = gs.screen;
  const Entity* target = scr.find_entity(gs.target_entity_id);
  if (target == nullptr) throw ConfigError("target entity missing");
  EntityCategory cat = target->category;
  auto verbs_it = b.desc_verbs.find(cat);
  auto nouns_it = b.desc_nouns.find(cat);
  if (verbs_it == b.desc_verbs.end() || verbs_it->second.empty() ||
      nouns_it == b.desc_nouns.end() || nouns_it->second.empty()) {
    throw ConfigError("empty descriptive template bank");
  }
  const std::string& verb = rng.pick(verbs_it->second);
  const std::string& noun = rng.pick(nouns_it->second);
  const std::string& prefix = rng.pick(b.prefixes);
  const std::string& tail = rng.pick(b.tails);

  std::string ref;
  switch (ref_type) {
    case RefType::Label: {
      ref = "the " + join_parts(gs.entity_labels.at(target->id)) + " " + noun;
      break;
    }
    case RefType::FullText:
      ref = target->text;
      break;
    case RefType::Ordinal: {
      int k = 0;
      for (const auto& e : scr.entities) {
        if (e.category == cat) ++k;
      }
      int r = reading_rank(scr, *target);
      std::vector<std::string> options = {kOrdinalWords[r]};
      if (r == 0) options.push_back("top");
      if (r == k - 1) {
        options.push_back("last");
        options.push_back("bottom");
      }
      if (r == k / 2) options.push_back("middle");
      ref = "the " + rng.pick(options) + " " + noun;
      if (rng.chance(0.4)) ref += " on the screen";
      break;
    }
    case RefType::PartialValue: {
      const std::string& word = gs.partial_words.at(target->id);
      switch (cat) {
        case EntityCategory::PhoneNumber:
          ref = "the " + noun + " ending in " + word;
          break;
        case EntityCategory::EmailAddress:
          ref = "the one at " + word;
          break;
        case EntityCategory::Url:
          ref = "the " + word + " " + noun;
          break;
        case EntityCategory::Address:
          ref = "the one on " + word;
          break;
        case EntityCategory::DateTime:
          ref = "the " + word + " one";
          break;
      }
      break;
    }
    case RefType::Simple:
      throw ConfigError("simple references are category-level only");
  }

  GeneratedSample out;
  out.ref_tokens = token_count(ref);
  Sample& s = out.sample;
  s.request.id = request_id;
  s.request.raw = join_parts({prefix, verb, ref, tail});
  s.request.tokens = tokenize(s.request.raw);
  s.screen = scr;
  s.candidates = scr.entities;
  s.gold_ids = {target->id};
  s.subset = Subset::Descriptive;
  s.ref_type = ref_type;
  return out;
}

GeneratedSample generate_category_sample(Rng& rng,
                                         const GeneratorConfig& config,
                                         const std::string& request_id) {
  const TemplateBanks& b = config.banks;
  if (b.generic_refs.empty() || b.multilabel_actions.empty()) {
    throw ConfigError("empty category-level template bank");
  }
  const std::string& prefix = rng.pick(b.prefixes);
  const std::string& tail = rng.pick(b.tails);

  std::string core;
  std::vector<EntityCategory> gold_cats;
  int ref_tokens = 0;
  if (rng.chance(config.multilabel_fraction)) {
    const CategoryAction& action = rng.pick(b.multilabel_actions);
    core = action.phrase;
    gold_cats = action.categories;
    ref_tokens = 1;  // "there" / "that"
  } else {
    EntityCategory cat = kAllCategories[rng.uniform(kNumCategories)];
    bool oblique = rng.chance(0.15);
    const auto& actions =
        oblique ? b.oblique_actions.at(cat) : b.single_actions.at(cat);
    if (actions.empty()) throw ConfigError("empty action bank");
    const std::string& action = rng.pick(actions);
    const std::string& ref = rng.chance(0.55)
                                 ? rng.pick(b.specific_refs.at(cat))
                                 : rng.pick(b.generic_refs);
    core = action + " " + ref;
    gold_cats = {cat};
    ref_tokens = token_count(ref);
  }

  GeneratedSample out;
  out.ref_tokens = ref_tokens;
  Sample& s = out.sample;
  s.request.id = request_id;
  s.request.raw = join_parts({prefix, core, tail});
  s.request.tokens = tokenize(s.request.raw);
  s.candidates = dummy_pool();
  for (EntityCategory c : gold_cats) s.gold_ids.push_back(static_cast<int>(c));
  std::sort(s.gold_ids.begin(), s.gold_ids.end());
  s.subset = Subset::CategoryLevel;
  s.ref_type = RefType::Simple;
  return out;
}

namespace {

RefType draw_ref_type(Rng& rng, const RefMix& mix) {
  double u = rng.real() * (mix.label + mix.full_text + mix.ordinal +
                           mix.partial_value);
  if ((u -= mix.label) < 0) return RefType::Label;
  if ((u -= mix.full_text) < 0) return RefType::FullText;
  if ((u -= mix.ordinal) < 0) return RefType::Ordinal;
  return RefType::PartialValue;
}

SubsetStats compute_stats(const std::vector<const Sample*>& samples,
                          const std::vector<int>& ref_tokens) {
  SubsetStats st;
  st.total_requests = static_cast<int>(samples.size());
  std::set<std::string> raws;
  std::set<std::string> screens;
  double tok_sum = 0, ref_sum = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = *samples[i];
    raws.insert(s.request.raw);
    if (s.screen) screens.insert(s.screen->id);
    if (s.gold_ids.size() > 1) ++st.multilabel_count;
    tok_sum += static_cast<double>(s.request.tokens.size());
    ref_sum += static_cast<double>(ref_tokens[i]);
  }
  st.unique_requests = static_cast<int>(raws.size());
  st.screen_count = static_cast<int>(screens.size());
  if (!samples.empty()) {
    st.tokens_per_request = tok_sum / static_cast<double>(samples.size());
    st.tokens_per_reference = ref_sum / static_cast<double>(samples.size());
  }
  return st;
}

}  // namespace

Corpus generate_corpus(const GeneratorConfig& config) {
  Rng rng(config.seed);
  Corpus corpus;

  // ---- category-level ----
  std::vector<GeneratedSample> cat_samples;
  std::set<std::string> seen_raws;
  int tagged_category = 0;
  long attempts = 0;
  long max_attempts = 200L * std::max(1, config.n_category_samples);
  while (static_cast<int>(cat_samples.size()) < config.n_category_samples) {
    if (++attempts > max_attempts) throw ExhaustedTemplatesError();
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "c-%05d",
                  static_cast<int>(cat_samples.size()));
    GeneratedSample gs = generate_category_sample(rng, config, idbuf);
    if (!seen_raws.insert(gs.sample.request.raw).second) continue;
    if (tagged_category < config.supervision_count) {
      gs.sample.supervision_tag = SupervisionTag::CategoryModule;
      ++tagged_category;
    }
    cat_samples.push_back(std::move(gs));
  }

  // ---- descriptive ----
  struct ScreenGroup {
    std::vector<GeneratedSample> samples;
  };
  std::vector<ScreenGroup> groups;
  int tagged_location = 0, tagged_text = 0;
  static const double kSameWeights[4] = {0.65, 0.35, 0.0, 0.0};  // 2..5
  for (int i = 0; i < config.n_descriptive_screens; ++i) {
    EntityCategory cat = kAllCategories[rng.uniform(kNumCategories)];
    double u = rng.real();
    int n_same = 2;
    for (int k = 0; k < 4; ++k) {
      if ((u -= kSameWeights[k]) < 0) {
        n_same = 2 + k;
        break;
      }
    }
    GeneratedScreen gscr = generate_screen_full(rng, config, cat, n_same);
    bool conflict = gscr.conflict_entity_id >= 0;

    std::vector<RefType> types;
    for (int r = 0; r < config.requests_per_screen; ++r) {
      types.push_back(draw_ref_type(rng, config.ref_mix));
    }
    if (conflict &&
        std::find(types.begin(), types.end(), RefType::Label) == types.end()) {
      types[rng.uniform(types.size())] = RefType::Label;
    }

    ScreenGroup group;
    for (int r = 0; r < config.requests_per_screen; ++r) {
      char idbuf[48];
      std::snprintf(idbuf, sizeof idbuf, "d-%04d-%d", i, r);
      GeneratedSample gs =
          generate_descriptive_sample(rng, gscr, types[r], config, idbuf);
      if (types[r] == RefType::Ordinal) {
        if (tagged_location < config.supervision_count) {
          gs.sample.supervision_tag = SupervisionTag::LocationModule;
          ++tagged_location;
        }
      } else if (tagged_text < config.supervision_count) {
        gs.sample.supervision_tag = SupervisionTag::TextModule;
        ++tagged_text;
      }
      group.samples.push_back(std::move(gs));
    }
    groups.push_back(std::move(group));
  }

  // ---- splits ----
  auto split_counts = [](int n) {
    int n_train = static_cast<int>(n * 0.8 + 0.5);
    int n_val = static_cast<int>(n * 0.1 + 0.5);
    if (n_train + n_val > n) n_val = n - n_train;
    return std::pair<int, int>{n_train, n_val};
  };

  std::vector<int> cat_order(cat_samples.size());
  for (std::size_t i = 0; i < cat_order.size(); ++i) cat_order[i] = static_cast<int>(i);
  rng.shuffle(cat_order);
  auto [cat_train, cat_val] = split_counts(static_cast<int>(cat_samples.size()));
  for (std::size_t i = 0; i < cat_order.size(); ++i) {
    const Sample& s = cat_samples[cat_order[i]].sample;
    if (static_cast<int>(i) < cat_train) corpus.train.push_back(s);
    else if (static_cast<int>(i) < cat_train + cat_val) corpus.val.push_back(s);
    else corpus.test.push_back(s);
  }

  std::vector<int> scr_order(groups.size());
  for (std::size_t i = 0; i < scr_order.size(); ++i) scr_order[i] = static_cast<int>(i);
  rng.shuffle(scr_order);
  auto [scr_train, scr_val] = split_counts(static_cast<int>(groups.size()));
  for (std::size_t i = 0; i < scr_order.size(); ++i) {
    auto& group = groups[scr_order[i]];
    auto* dest = static_cast<int>(i) < scr_train
                     ? &corpus.train
                     : (static_cast<int>(i) < scr_train + scr_val ? &corpus.val
                                                                  : &corpus.test);
    for (auto& gs : group.samples) dest->push_back(gs.sample);
  }

  // ---- stats ----
  std::vector<const Sample*> cat_ptrs, desc_ptrs;
  std::vector<int> cat_refs, desc_refs;
  for (const auto& gs : cat_samples) {
    cat_ptrs.push_back(&gs.sample);
    cat_refs.push_back(gs.ref_tokens);
  }
  for (const auto& group : groups) {
    for (const auto& gs : group.samples) {
      desc_ptrs.push_back(&gs.sample);
      desc_refs.push_back(gs.ref_tokens);
    }
  }
  corpus.stats.category_level = compute_stats(cat_ptrs, cat_refs);
  corpus.stats.descriptive = compute_stats(desc_ptrs, desc_refs);

  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto* split : {&corpus.train, &corpus.val, &corpus.test}) {
    for (const auto& s : *split) h = fnv1a(to_json(s).dump(), h);
  }
  char hashbuf[32];
  std::snprintf(hashbuf, sizeof hashbuf, "%016llx",
                static_cast<unsigned long long>(h));
  corpus.stats.corpus_hash = hashbuf;
  return corpus;
}

nlohmann::json to_json(const SubsetStats& s) {
  return nlohmann::json{{"total_requests", s.total_requests},
                        {"unique_requests", s.unique_requests},
                        {"multilabel_count", s.multilabel_count},
                        {"screen_count", s.screen_count},
                        {"tokens_per_request", s.tokens_per_request},
                        {"tokens_per_reference", s.tokens_per_reference}};
}

nlohmann::json to_json(const CorpusStats& s) {
  return nlohmann::json{{"category_level", to_json(s.category_level)},
                        {"descriptive", to_json(s.descriptive)},
                        {"corpus_hash", s.corpus_hash}};
}

void write_corpus(const Corpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_samples_file(dir + "/train.ndjson", corpus.train);
  write_samples_file(dir + "/val.ndjson", corpus.val);
  write_samples_file(dir + "/test.ndjson", corpus.test);
  std::ofstream stats(dir + "/stats.json");
  if (!stats) throw std::runtime_error("cannot write stats.json");
  stats << to_json(corpus.stats).dump(2) << "\n";
}

Corpus load_corpus(const std::string& dir) {
  Corpus corpus;
  corpus.train = read_samples_file(dir + "/train.ndjson");
  corpus.val = read_samples_file(dir + "/val.ndjson");
  corpus.test = read_samples_file(dir + "/test.ndjson");
  return corpus;
}

}  // namespace srr
