#include "cocite/citation_graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>

#include "cocite/errors.hpp"

namespace cocite {

namespace {
constexpr char kMagic[4] = {'C', 'C', 'G', 'R'};
constexpr std::uint32_t kSnapshotVersion = 1;

void check_year(int year, long line) {
    if (year < 1500 || year > 2100)
        throw IngestError("publication year " + std::to_string(year) + " outside [1500, 2100]",
                          line);
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw DataError("snapshot truncated");
    return v;
}
}  // namespace

NodeIndex CitationGraph::Builder::add_node(std::string id, int year) {
    if (id.empty()) throw DataError("empty publication id");
    check_year(year, 0);
    auto it = index_.find(id);
    if (it != index_.end()) {
        if (pubs_[it->second].year != year)
            throw DataError("conflicting years for id '" + id + "'");
        ++stats_.duplicate_nodes;
        return it->second;
    }
    if (pubs_.size() >= std::numeric_limits<NodeIndex>::max())
        throw DataError("too many nodes");
    const NodeIndex v = static_cast<NodeIndex>(pubs_.size());
    index_.emplace(id, v);
    pubs_.push_back(Publication{std::move(id), year});
    return v;
}

void CitationGraph::Builder::add_edge(NodeIndex citing, NodeIndex cited) {
    if (citing >= pubs_.size() || cited >= pubs_.size())
        throw DataError("edge endpoint out of range");
    if (citing == cited) {
        ++stats_.dropped_self_loops;
        return;
    }
    edges_.emplace_back(citing, cited);
}

CitationGraph CitationGraph::Builder::build() {
    if (pubs_.empty()) throw DataError("graph has no nodes");
    CitationGraph g;
    g.pubs_ = std::move(pubs_);
    g.index_ = std::move(index_);
    const std::size_t n = g.pubs_.size();
    g.out_.assign(n, {});
    g.in_.assign(n, {});

    const std::size_t raw = edges_.size();
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    stats_.duplicate_edges = raw - edges_.size();
    for (const auto& [a, b] : edges_) {
        g.out_[a].push_back(b);
        g.in_[b].push_back(a);
    }
    for (auto& adj : g.out_) adj.shrink_to_fit();
    for (auto& adj : g.in_) {
        std::sort(adj.begin(), adj.end());
        adj.shrink_to_fit();
    }
    g.edge_count_ = edges_.size();

    g.min_year_ = std::numeric_limits<int>::max();
    g.max_year_ = std::numeric_limits<int>::min();
    for (const auto& p : g.pubs_) {
        g.min_year_ = std::min(g.min_year_, p.year);
        g.max_year_ = std::max(g.max_year_, p.year);
    }
    stats_.nodes = n;
    stats_.edges = g.edge_count_;
    return g;
}

CitationGraph CitationGraph::ingest(std::istream& nodes_src, std::istream& edges_src,
                                    const DsvReader::Options& opts, IngestStats* stats) {
    Builder b;
    DsvReader nodes_reader(nodes_src, opts);
    bool any_node = false;
    while (auto row = nodes_reader.next()) {
        const long line = nodes_reader.line_number();
        if (row->size() != 2) throw IngestError("expected 2 columns (id, year)", line);
        const long long year = parse_int((*row)[1], line);
        check_year(static_cast<int>(year), line);
        b.add_node((*row)[0], static_cast<int>(year));
        any_node = true;
    }
    if (!any_node) throw DataError("node source is empty");

    DsvReader edges_reader(edges_src, opts);
    std::size_t dropped_unknown = 0;
    while (auto row = edges_reader.next()) {
        const long line = edges_reader.line_number();
        if (row->size() != 2) throw IngestError("expected 2 columns (citing_id, cited_id)", line);
        auto citing = b.index_.find((*row)[0]);
        auto cited = b.index_.find((*row)[1]);
        if (citing == b.index_.end() || cited == b.index_.end()) {
            ++dropped_unknown;
            continue;
        }
        b.add_edge(citing->second, cited->second);
    }

    CitationGraph g = b.build();
    IngestStats s = b.stats();
    s.dropped_unknown_endpoint = dropped_unknown;
    if (stats) *stats = s;
    return g;
}

std::optional<NodeIndex> CitationGraph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeIndex CitationGraph::index_of(std::string_view id) const {
    auto v = find(id);
    if (!v) throw NotFoundError("unknown publication id '" + std::string(id) + "'");
    return *v;
}

std::vector<std::string> CitationGraph::neighbor_ids(std::string_view id, Direction d) const {
    const NodeIndex v = index_of(id);
    std::vector<std::string> out;
    for (NodeIndex u : neighbors(v, d)) out.push_back(pubs_[u].id);
    std::sort(out.begin(), out.end());
    return out;
}

bool CitationGraph::cites(NodeIndex citing, NodeIndex cited) const {
    const auto& adj = out_[citing];
    return std::binary_search(adj.begin(), adj.end(), cited);
}

void CitationGraph::save(std::ostream& out) const {
    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kSnapshotVersion);
    write_pod(out, static_cast<std::uint64_t>(pubs_.size()));
    for (const auto& p : pubs_) {
        write_pod(out, static_cast<std::uint32_t>(p.id.size()));
        out.write(p.id.data(), static_cast<std::streamsize>(p.id.size()));
        write_pod(out, static_cast<std::int32_t>(p.year));
    }
    write_pod(out, static_cast<std::uint64_t>(edge_count_));
    for (NodeIndex a = 0; a < out_.size(); ++a)
        for (NodeIndex bnode : out_[a]) {
            write_pod(out, a);
            write_pod(out, bnode);
        }
}

CitationGraph CitationGraph::load(std::istream& in) {
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(magic, magic + 4, kMagic)) throw DataError("not a graph snapshot");
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kSnapshotVersion)
        throw DataError("unsupported snapshot version " + std::to_string(version));
    Builder b;
    const auto n = read_pod<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto len = read_pod<std::uint32_t>(in);
        std::string id(len, '\0');
        in.read(id.data(), len);
        if (!in) throw DataError("snapshot truncated");
        const auto year = read_pod<std::int32_t>(in);
        b.add_node(std::move(id), year);
    }
    const auto m = read_pod<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < m; ++i) {
        const auto a = read_pod<NodeIndex>(in);
        const auto c = read_pod<NodeIndex>(in);
        b.add_edge(a, c);
    }
    return b.build();
}

}  // namespace cocite
