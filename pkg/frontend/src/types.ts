// Payload shapes of the engine's HTTP API. The UI renders these verbatim;
// nothing is recomputed client-side.

export interface ViewConfig {
  channels: string[];
  time_range: [number, number] | null;
  time_offset: number;
}

export interface GraphStats {
  channels: Record<string, number>;
  nodes: number;
  visible_edges: number;
  extent: [number, number] | null;
}

export interface GraphSummary {
  id: string;
  nodes: number;
  edges: number;
  view: ViewConfig;
  stats: GraphStats;
}

export interface Histogram {
  origin: number;
  bin_width: number;
  counts: number[];
}

export interface ScatterPoint {
  person: number;
  time: number;
  channel: string;
  edge: number;
}

export interface StructureLink {
  a: number;
  b: number;
  weight: number;
}

export interface StructurePayload {
  persons: number[];
  links: StructureLink[];
}

export interface HeatmapPayload {
  persons: number[];
  origin: number;
  bin_width: number;
  cells: number[][];
}

export interface SnippetEdge {
  source: number;
  target: number;
  channel: string;
  time: number;
  weight: number;
}

export interface Snippet {
  nodes: number[];
  edges: SnippetEdge[];
}

export interface ScoreBreakdown {
  total: number;
  presence: number;
  count: number;
  temporal: number;
}

export interface Candidate {
  frontier: number;
  anchors: number[];
  candidate: number;
  score: ScoreBreakdown;
  evidence: {
    template: Snippet | null;
    target: Snippet | null;
  };
}

export interface DecisionEntry {
  template_node: number;
  target_node: number;
  verdict: "accept" | "reject";
  actor: "user" | "auto";
  at: number;
  score: number;
}

export interface SessionSummary {
  id: string;
  template_graph: string;
  target_graph: string;
  S: number[];
  T: number[];
  S_size: number;
  T_size: number;
  mapping: Record<string, number>;
  rejected: [number, number][];
  status: "active" | "complete" | "exhausted" | "iteration_cap";
  seed: Record<string, number>;
  log_length: number;
  log: DecisionEntry[];
}

export interface RankedCandidate {
  index: number;
  score: number;
  mapping: Record<string, number>;
  status: string;
  candidate: string;
}

export interface ViewUpdate {
  channels?: string[];
  time_range?: [number, number];
  clear_time_range?: boolean;
  time_offset?: number;
}
