// Converts the public Cora/Citeseer raw files (paper.content / paper.cites)
// into the node/edge format this project loads:
//   node file: id<TAB>f1 f2 ... fd<TAB>label
//   edge file: src<TAB>dst
// String node ids and label words are mapped to dense integers.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  if (argc != 5) {
    std::cerr << "usage: convert_citation <content-file> <cites-file> <out-nodes> <out-edges>\n";
    return 2;
  }
  const std::string content_path = argv[1], cites_path = argv[2];
  const std::string out_nodes = argv[3], out_edges = argv[4];

  std::ifstream content(content_path);
  if (!content) {
    std::cerr << "cannot open " << content_path << "\n";
    return 1;
  }
  std::map<std::string, int> id_map, label_map;
  std::ofstream nodes(out_nodes);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(content, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string field;
    while (ls >> field) fields.push_back(field);
    if (fields.size() < 3) {
      std::cerr << content_path << ":" << lineno << ": too few fields\n";
      return 1;
    }
    const std::string& id = fields.front();
    const std::string& label = fields.back();
    const int dense_id = static_cast<int>(id_map.size());
    if (!id_map.emplace(id, dense_id).second) {
      std::cerr << content_path << ":" << lineno << ": duplicate id " << id << "\n";
      return 1;
    }
    const auto [it, inserted] = label_map.emplace(label, static_cast<int>(label_map.size()));
    nodes << dense_id << '\t';
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      nodes << fields[i] << (i + 2 == fields.size() ? "" : " ");
    }
    nodes << '\t' << it->second << '\n';
  }

  std::ifstream cites(cites_path);
  if (!cites) {
    std::cerr << "cannot open " << cites_path << "\n";
    return 1;
  }
  std::ofstream edges(out_edges);
  lineno = 0;
  std::size_t skipped = 0;
  while (std::getline(cites, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a >> b)) {
      std::cerr << cites_path << ":" << lineno << ": expected two ids\n";
      return 1;
    }
    const auto ia = id_map.find(a), ib = id_map.find(b);
    if (ia == id_map.end() || ib == id_map.end()) {
      ++skipped;  // some public dumps cite papers outside the content file
      continue;
    }
    edges << ia->second << '\t' << ib->second << '\n';
  }
  std::cout << "wrote " << id_map.size() << " nodes, " << label_map.size() << " classes";
  if (skipped) std::cout << " (skipped " << skipped << " dangling edges)";
  std::cout << "\n";
  return 0;
}
