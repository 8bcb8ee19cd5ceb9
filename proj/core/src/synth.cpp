#include "fresco/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fresco/error.hpp"
#include "fresco/traits.hpp"

namespace fresco {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int range(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
  }
  std::size_t weighted(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    double u = uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (u < w[i]) return i;
      u -= w[i];
    }
    return w.size() - 1;
  }

 private:
  std::mt19937_64 gen_;
};

double round4(double x) { return std::round(x * 10000.0) / 10000.0; }

struct Concept {
  std::string name;
  std::vector<std::string> synonyms;  // first entry doubles as the segmentation label
  bool stuff = false;
  bool ocr = false;
};

const std::vector<Concept>& concepts() {
  static const std::vector<Concept> c = {
      {"person", {"person", "people", "man", "woman", "boy", "girl", "child"}},
      {"car", {"car", "land vehicle", "sedan", "sport car", "automobile"}},
      {"dog", {"dog", "puppy", "canine"}},
      {"cat", {"cat", "kitten", "feline"}},
      {"tree", {"tree", "plant", "oak"}},
      {"building", {"building", "house", "tower", "facade"}},
      {"bicycle", {"bicycle", "bike", "cycle"}},
      {"bird", {"bird", "sparrow", "pigeon"}},
      {"chair", {"chair", "seat", "armchair"}},
      {"bottle", {"bottle", "flask"}},
      {"sign", {"sign", "signboard", "placard"}, false, true},
      {"boat", {"boat", "ship", "sailboat"}},
      {"horse", {"horse", "pony", "stallion"}},
      {"sky", {"sky", "clouds"}, true},
      {"grass", {"grass", "lawn"}, true},
      {"road", {"road", "street"}, true},
      {"wall", {"wall"}, true},
      {"water", {"water", "sea"}, true},
      {"sand", {"sand", "beach"}, true},
  };
  return c;
}

const std::vector<std::string> kPersonObjectLabels = {"person", "man", "woman", "boy", "girl"};
const std::vector<std::string> kOcrWords = {"open", "stop", "exit", "sale", "cafe", "hotel", "bar", "main"};
const std::vector<int> kWidths = {640, 800, 1024, 1280};
const std::vector<int> kHeights = {480, 600, 720, 768};

// Dominant-emotion mix planted over faces; order follows the emotion label space.
const std::vector<double> kEmotionMix = {0.30, 0.30, 0.10, 0.08, 0.05, 0.04, 0.08, 0.05};
// Group buckets: none, single, couple, small, medium, large, crowd.
const std::vector<double> kPeopleMix = {0.30, 0.25, 0.15, 0.12, 0.08, 0.06, 0.04};

std::vector<double> unit_noise(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : v) {
      x = rng.uniform(-1.0, 1.0);
      n2 += x * x;
    }
  } while (n2 < 1e-6);
  const double n = std::sqrt(n2);
  for (double& x : v) x /= n;
  return v;
}

EmbeddingTable make_vocabulary(std::uint64_t seed, std::size_t dim) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  EmbeddingTable table(dim);
  for (const Concept& c : concepts()) {
    const std::vector<double> base = unit_noise(rng, dim);
    for (std::size_t s = 0; s < c.synonyms.size(); ++s) {
      const double rho = s == 0 ? 0.15 : rng.uniform(0.2, 0.9);
      const std::vector<double> noise = unit_noise(rng, dim);
      std::vector<double> v(dim);
      double n2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        v[k] = base[k] + rho * noise[k];
        n2 += v[k] * v[k];
      }
      const double n = std::sqrt(n2);
      for (double& x : v) x /= n;
      table.insert(c.synonyms[s], std::move(v));
    }
  }
  return table;
}

std::vector<double> ratios(const std::vector<int>& counts) {
  int total = 0;
  for (int c : counts) total += c;
  std::vector<double> out;
  out.reserve(counts.size());
  for (int c : counts) out.push_back(static_cast<double>(c) / static_cast<double>(total));
  return out;
}

int people_for_bucket(Rng& rng, std::size_t bucket, int max_people) {
  switch (bucket) {
    case 0: return 0;
    case 1: return 1;
    case 2: return 2;
    case 3: return rng.range(3, 6);
    case 4: return rng.range(7, 12);
    case 5: return rng.range(13, 30);
    default: return rng.range(31, std::max(31, max_people));
  }
}

class Generator {
 public:
  Generator(const SynthOptions& opts) : opts_(opts), rng_(opts.seed) {}

  ImageRecord image(const std::string& id, int& people_out, std::vector<std::size_t>& emotions) {
    ImageRecord r;
    r.image_id = id;
    r.width = rng_.pick(kWidths);
    r.height = rng_.pick(kHeights);
    const double m = rng_.uniform();
    r.medium = m < 0.9 ? Medium::Photograph : m < 0.97 ? Medium::Illustration : Medium::Other;
    used_centres_.clear();

    int people = std::min(people_for_bucket(rng_, rng_.weighted(kPeopleMix), opts_.max_people), opts_.max_people);
    std::vector<std::size_t> present;  // non-person, non-stuff concepts with their instance counts
    std::vector<int> per_concept;
    if (opts_.fixed_objects) {
      people = std::min(people, *opts_.fixed_objects);
      for (int k = people; k < *opts_.fixed_objects; ++k) add_concept(present, per_concept);
    } else {
      const int n_concepts = rng_.range(0, 3);
      for (int k = 0; k < n_concepts; ++k) add_concept(present, per_concept, rng_.range(1, 2));
    }
    int faces = 0;
    if (opts_.fixed_faces) {
      faces = *opts_.fixed_faces;
    } else if (people > 0 && !rng_.chance(0.1)) {
      faces = std::min(people, rng_.range(1, 4));
    }
    people_out = people;

    const bool portrait = faces == 1 && rng_.chance(0.15);
    for (int f = 0; f < faces; ++f) r.instances.push_back(face(r, "f" + std::to_string(f), portrait, emotions));

    int oid = 0;
    for (int p = 0; p < people; ++p) {
      r.instances.push_back(object(r, "o" + std::to_string(oid++), rng_.pick(kPersonObjectLabels), false));
    }
    std::vector<std::string> detector_labels;
    for (std::size_t c = 0; c < present.size(); ++c) {
      const Concept& con = concepts()[present[c]];
      const std::string& label = rng_.pick(con.synonyms);
      detector_labels.push_back(label);
      for (int k = 0; k < per_concept[c]; ++k) {
        r.instances.push_back(object(r, "o" + std::to_string(oid++), label, con.ocr));
      }
    }

    global(r);
    std::vector<std::size_t> stuff;
    for (std::size_t c = 0; c < concepts().size(); ++c) {
      if (concepts()[c].stuff && rng_.chance(0.35)) stuff.push_back(c);
    }
    if (stuff.empty()) stuff.push_back(13 + static_cast<std::size_t>(rng_.range(0, 5)));
    segmentation(r, people, present, per_concept, stuff);
    tags(r, people, present, stuff);
    caption(r, people, detector_labels, stuff);
    scene(r);
    return r;
  }

 private:
  void add_concept(std::vector<std::size_t>& present, std::vector<int>& per_concept, int count = 1) {
    // Concepts 1..12 are countable things.
    const auto c = static_cast<std::size_t>(rng_.range(1, 12));
    auto it = std::find(present.begin(), present.end(), c);
    if (it != present.end()) {
      per_concept[static_cast<std::size_t>(it - present.begin())] += count;
      return;
    }
    present.push_back(c);
    per_concept.push_back(count);
  }

  BBox place(const ImageRecord& r, int min_w, int max_w, int min_h, int max_h) {
    for (int attempt = 0;; ++attempt) {
      const int w = std::clamp(rng_.range(min_w, max_w), 1, r.width);
      const int h = std::clamp(rng_.range(min_h, max_h), 1, r.height);
      const int x = rng_.range(0, r.width - w);
      const int y = rng_.range(0, r.height - h);
      // Distinct centroids keep optimal matchings unique for duplicated records.
      if (used_centres_.insert({2 * x + w, 2 * y + h}).second || attempt > 64) {
        return BBox{static_cast<double>(x), static_cast<double>(y), static_cast<double>(w), static_cast<double>(h)};
      }
    }
  }

  InstanceAnnotation face(const ImageRecord& r, std::string id, bool portrait, std::vector<std::size_t>& emotions) {
    InstanceAnnotation inst;
    inst.instance_id = std::move(id);
    inst.category = "face";
    if (portrait) {
      inst.bbox = place(r, r.width * 6 / 10, r.width * 8 / 10, r.height * 6 / 10, r.height * 8 / 10);
    } else {
      inst.bbox = place(r, r.width / 25, r.width / 6, r.height / 20, r.height / 5);
    }
    inst.mean_depth = round4(rng_.uniform(0.05, 0.95));

    FaceAttributes f;
    f.age = rng_.range(1, 90);
    const int g = rng_.range(0, 100);
    f.gender_conf = ratios({g, 100 - g});
    std::vector<int> eth(6);
    for (int& c : eth) c = rng_.range(0, 20);
    eth[static_cast<std::size_t>(rng_.range(0, 5))] += 40;
    f.ethnicity_conf = ratios(eth);
    const std::size_t dominant = rng_.weighted(kEmotionMix);
    std::vector<int> emo(8);
    for (int& c : emo) c = rng_.range(0, 5);
    emo[dominant] += 60;
    f.emotion_conf = ratios(emo);
    ++emotions[dominant];
    f.attribute_conf.resize(40);
    for (double& a : f.attribute_conf) a = rng_.range(1, 99) / 100.0;
    f.valence = round4(rng_.uniform(-1.0, 1.0));
    f.arousal = round4(rng_.uniform(-1.0, 1.0));
    f.head_pose = {round4(rng_.uniform(-90.0, 90.0)), round4(rng_.uniform(-60.0, 60.0)),
                   round4(rng_.uniform(-45.0, 45.0))};
    f.gaze = {round4(rng_.uniform(-60.0, 60.0)), round4(rng_.uniform(-40.0, 40.0))};
    inst.attributes = std::move(f);
    return inst;
  }

  InstanceAnnotation object(const ImageRecord& r, std::string id, const std::string& label, bool ocr) {
    InstanceAnnotation inst;
    inst.instance_id = std::move(id);
    inst.category = label;
    inst.bbox = place(r, r.width / 20, r.width / 3, r.height / 20, r.height / 2);
    inst.mean_depth = round4(rng_.uniform(0.05, 0.95));
    ObjectAttributes o;
    o.detector_conf = round4(rng_.uniform(0.3, 1.0));
    if (ocr && rng_.chance(0.7)) {
      std::set<std::string> words;
      const int n = rng_.range(1, 3);
      for (int k = 0; k < n; ++k) words.insert(rng_.pick(kOcrWords));
      o.ocr_text = std::vector<std::string>(words.begin(), words.end());
    }
    inst.attributes = std::move(o);
    return inst;
  }

  void global(ImageRecord& r) {
    GlobalMeasures& g = r.global;
    g.grayscale = rng_.chance(0.05);
    g.brightness = round4(rng_.uniform(0.05, 0.95));
    g.saturation = g.grayscale ? 0.0 : round4(rng_.uniform(0.05, 0.95));
    std::vector<int> weights(opts_.palette_size);
    for (int& w : weights) w = rng_.range(1, 20);
    const std::vector<double> pw = ratios(weights);
    for (std::size_t k = 0; k < opts_.palette_size; ++k) {
      PaletteEntry e;
      const int grey = rng_.range(0, 255);
      for (double& c : e.rgb) c = g.grayscale ? grey : rng_.range(0, 255);
      e.weight = pw[k];
      g.palette.push_back(e);
    }
    for (auto& ch : g.rgb_histograms.channels) {
      std::vector<int> counts(opts_.bins);
      const int peak = rng_.range(0, static_cast<int>(opts_.bins) - 1);
      for (std::size_t b = 0; b < opts_.bins; ++b) {
        const int d = std::abs(static_cast<int>(b) - peak);
        counts[b] = rng_.range(0, 10) + std::max(0, 40 - 3 * d);
      }
      ch = ratios(counts);
    }
    g.background_mean_depth = round4(rng_.uniform(0.3, 1.0));
  }

  void segmentation(ImageRecord& r, int people, const std::vector<std::size_t>& present,
                    const std::vector<int>& per_concept, const std::vector<std::size_t>& stuff) {
    // Coverage in thousandths; at most 1 + 12 + 6 labels of <= 50 units.
    auto cover = [&](const std::string& label) { r.coverage[label] = rng_.range(5, 50) / 1000.0; };
    if (people > 0) {
      cover("person");
      for (int p = 0; p < people; ++p) r.panoptic.push_back({"person", true});
    }
    for (std::size_t c = 0; c < present.size(); ++c) {
      const std::string& label = concepts()[present[c]].synonyms.front();
      cover(label);
      for (int k = 0; k < per_concept[c]; ++k) r.panoptic.push_back({label, true});
    }
    for (std::size_t s : stuff) {
      const std::string& label = concepts()[s].synonyms.front();
      cover(label);
      r.panoptic.push_back({label, false});
    }
  }

  void tags(ImageRecord& r, int people, const std::vector<std::size_t>& present, const std::vector<std::size_t>& stuff) {
    std::set<std::string> labels;
    if (people > 0 && rng_.chance(0.95)) labels.insert(rng_.pick(concepts()[0].synonyms));
    for (std::size_t c : present) {
      if (rng_.chance(0.85)) labels.insert(rng_.pick(concepts()[c].synonyms));
    }
    for (std::size_t c : stuff) {
      if (rng_.chance(0.5)) labels.insert(rng_.pick(concepts()[c].synonyms));
    }
    if (rng_.chance(0.3)) labels.insert(rng_.pick(concepts()[static_cast<std::size_t>(rng_.range(1, 12))].synonyms));
    for (const std::string& l : labels) r.tags.push_back({l, round4(rng_.uniform(0.5, 1.0))});
  }

  void caption(ImageRecord& r, int people, const std::vector<std::string>& objects,
               const std::vector<std::size_t>& stuff) {
    std::string text;
    if (people == 0) {
      text = "a view";
    } else if (people == 1) {
      text = rng_.pick(std::vector<std::string>{"a man", "a woman", "a person", "a child"});
    } else if (people == 2) {
      text = "a couple of people";
    } else if (people <= 6) {
      text = rng_.pick(std::vector<std::string>{"a family", "a group of people"});
    } else if (people <= 12) {
      text = "a group of people";
    } else {
      text = "a crowd of people";
    }
    if (!objects.empty()) text += " with a " + objects.front();
    text += " near the " + concepts()[stuff.front()].synonyms.front();
    CaptionEntry c;
    c.text = std::move(text);
    c.embedding.resize(opts_.caption_dim);
    for (double& x : c.embedding) x = round4(rng_.uniform(-1.0, 1.0));
    c.embedding[0] = 0.5;  // never the zero vector
    r.caption = std::move(c);
  }

  void scene(ImageRecord& r) {
    SceneEntry s;
    std::vector<int> counts(opts_.scene_classes);
    for (int& c : counts) c = rng_.range(0, 10);
    counts[static_cast<std::size_t>(rng_.range(0, static_cast<int>(opts_.scene_classes) - 1))] += 30;
    s.confidence = ratios(counts);
    s.indoor_outdoor = rng_.chance(0.4) ? IndoorOutdoor::Indoor : IndoorOutdoor::Outdoor;
    s.manmade_natural = rng_.chance(0.5) ? ManmadeNatural::Manmade : ManmadeNatural::Natural;
    r.scene = std::move(s);
  }

  const SynthOptions& opts_;
  Rng rng_;
  std::set<std::pair<int, int>> used_centres_;
};

}  // namespace

SynthOutput synthesize(const SynthOptions& opts) {
  if (opts.bins == 0 || opts.palette_size == 0 || opts.scene_classes == 0 || opts.caption_dim == 0 ||
      opts.embedding_dim == 0) {
    throw Error(Errc::InvalidConfig, "synth", "sizes must be >= 1");
  }
  if (opts.max_people < 0 || (opts.fixed_faces && *opts.fixed_faces < 0) ||
      (opts.fixed_objects && *opts.fixed_objects < 0)) {
    throw Error(Errc::InvalidConfig, "synth", "counts must be >= 0");
  }

  SynthOutput out;
  out.vocabulary = make_vocabulary(opts.seed, opts.embedding_dim);
  out.truth.seed = opts.seed;
  out.truth.n = opts.n;
  out.truth.emotion_counts.assign(8, 0);

  std::size_t width = 5;
  for (std::size_t v = opts.n; v >= 100000; v /= 10) ++width;
  auto make_id = [&](std::size_t i) {
    std::string digits = std::to_string(i);
    return "img_" + std::string(width - std::min(width, digits.size()), '0') + digits;
  };

  Generator gen(opts);
  Rng dup_rng(opts.seed * 0x2545f4914f6cdd1dULL + 1);
  std::vector<std::size_t> originals;
  for (std::size_t i = 0; i < opts.n; ++i) {
    const std::string id = make_id(i);
    if (!originals.empty() && dup_rng.chance(opts.duplicate_rate)) {
      const std::size_t src = dup_rng.pick(originals);
      ImageRecord copy = out.records[src];
      copy.image_id = id;
      out.records.push_back(std::move(copy));
      out.truth.people.push_back(out.truth.people[src]);
      out.truth.faces.push_back(out.truth.faces[src]);
      for (const InstanceAnnotation& inst : out.records.back().instances) {
        if (!inst.is_face()) continue;
        const auto& e = inst.face().emotion_conf;
        ++out.truth.emotion_counts[static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin())];
      }
      out.truth.duplicates.emplace_back(out.records[src].image_id, id);
      continue;
    }
    int people = 0;
    out.records.push_back(gen.image(id, people, out.truth.emotion_counts));
    originals.push_back(i);
    out.truth.people.push_back(people);
    int faces = 0;
    for (const InstanceAnnotation& inst : out.records.back().instances) faces += inst.is_face();
    out.truth.faces.push_back(faces);
  }
  for (int p : out.truth.people) {
    if (p > 0) ++out.truth.group_counts[static_cast<std::size_t>(discretize_group_size(p))];
  }
  return out;
}

nlohmann::ordered_json truth_to_json(const GroundTruth& truth) {
  nlohmann::ordered_json j;
  j["seed"] = truth.seed;
  j["n"] = truth.n;
  j["people"] = truth.people;
  j["faces"] = truth.faces;
  j["group_counts"] = {{"single", truth.group_counts[0]},      {"couple", truth.group_counts[1]},
                       {"small_group", truth.group_counts[2]}, {"medium_group", truth.group_counts[3]},
                       {"large_group", truth.group_counts[4]}, {"crowd", truth.group_counts[5]}};
  j["emotion_counts"] = truth.emotion_counts;
  nlohmann::ordered_json dups = nlohmann::ordered_json::array();
  for (const auto& [a, b] : truth.duplicates) dups.push_back({a, b});
  j["duplicates"] = std::move(dups);
  return j;
}

}  // namespace fresco
