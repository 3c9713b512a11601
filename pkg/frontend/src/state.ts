// Coordinated-views state. Every control mutation issues exactly one API
// write followed by refetches of the views whose data depends on it, and
// nothing else. All numbers live in fetched payloads.

import { ApiClient } from "./api.js";
import type {
  GraphStats,
  HeatmapPayload,
  Histogram,
  ScatterPoint,
  SessionSummary,
  StructurePayload,
  ViewConfig,
  ViewUpdate,
} from "./types.js";

export const MAX_PERSON_TABS = 12;

export interface OrganizationData {
  stats: GraphStats;
  histogram: Histogram;
  scatter: ScatterPoint[];
  spatial: Record<string, number>;
  structure: StructurePayload;
}

export interface OpenGraph {
  id: string;
  view: ViewConfig;
  data: OrganizationData;
}

export interface PersonTab {
  graph: string;
  person: number;
  channels: Record<string, number>;
}

export type Listener = (event: string) => void;

export class UiStore {
  readonly graphs = new Map<string, OpenGraph>();
  readonly personTabs: PersonTab[] = [];
  heatmapChannel = "email";
  heatmap: HeatmapPayload | null = null;
  activeSession: SessionSummary | null = null;
  highlightedPerson: number | null = null;

  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(event: string): void {
    for (const listener of this.listeners) listener(event);
  }

  private async fetchOrganization(id: string): Promise<OrganizationData> {
    const [stats, histogram, scatter, spatial, structure] = await Promise.all([
      this.api.stats(id),
      this.api.histogram(id),
      this.api.scatter(id),
      this.api.spatial(id),
      this.api.structure(id),
    ]);
    return {
      stats,
      histogram,
      scatter: scatter.points,
      spatial: spatial.countries,
      structure,
    };
  }

  async openGraph(id: string): Promise<OpenGraph> {
    const listed = await this.api.listGraphs();
    const summary = listed.graphs.find((g) => g.id === id);
    if (!summary) throw new Error(`graph '${id}' is not loaded on the server`);
    const graph: OpenGraph = {
      id,
      view: summary.view,
      data: await this.fetchOrganization(id),
    };
    this.graphs.set(id, graph);
    this.emit(`graph:${id}`);
    return graph;
  }

  closeGraph(id: string): void {
    this.graphs.delete(id);
    for (let i = this.personTabs.length - 1; i >= 0; i--) {
      if (this.personTabs[i].graph === id) this.personTabs.splice(i, 1);
    }
    this.emit(`graph:${id}`);
  }

  /**
   * Control-panel mutation: one PUT, then refetch the organization views of
   * that graph and the personnel views of its selected persons. Other
   * graphs are untouched.
   */
  async setViewControls(id: string, update: ViewUpdate): Promise<void> {
    const graph = this.graphs.get(id);
    if (!graph) throw new Error(`graph '${id}' is not open`);
    const result = await this.api.putView(id, update);
    graph.view = result.view;
    graph.data = await this.fetchOrganization(id);
    await this.refreshPersonnel(id);
    this.emit(`graph:${id}`);
  }

  /** Structure-view click: open a personnel tab; non-person ids are inert. */
  async selectPerson(graphId: string, person: number): Promise<boolean> {
    const graph = this.graphs.get(graphId);
    if (!graph) return false;
    if (!graph.data.structure.persons.includes(person)) return false; // not a person
    if (this.personTabs.some((t) => t.graph === graphId && t.person === person)) {
      return false; // already selected
    }
    const bar = await this.api.personChannels(graphId, person);
    this.personTabs.push({ graph: graphId, person, channels: bar.channels });
    while (this.personTabs.length > MAX_PERSON_TABS) this.personTabs.shift();
    await this.refreshHeatmap();
    this.emit("personnel");
    return true;
  }

  deselectPerson(graphId: string, person: number): Promise<void> {
    const i = this.personTabs.findIndex((t) => t.graph === graphId && t.person === person);
    if (i >= 0) this.personTabs.splice(i, 1);
    return this.refreshHeatmap().then(() => this.emit("personnel"));
  }

  async setHeatmapChannel(channel: string): Promise<void> {
    this.heatmapChannel = channel;
    await this.refreshHeatmap();
    this.emit("personnel");
  }

  private async refreshHeatmap(): Promise<void> {
    if (this.personTabs.length === 0) {
      this.heatmap = null;
      return;
    }
    this.heatmap = await this.api.heatmap(
      this.personTabs.map((t) => ({ graph: t.graph, person: t.person })),
      this.heatmapChannel,
    );
  }

  /** Re-request personnel surfaces whose person belongs to the given graph. */
  private async refreshPersonnel(graphId: string): Promise<void> {
    let touched = false;
    for (const tab of this.personTabs) {
      if (tab.graph !== graphId) continue;
      const bar = await this.api.personChannels(tab.graph, tab.person);
      tab.channels = bar.channels;
      touched = true;
    }
    if (touched) {
      await this.refreshHeatmap();
      this.emit("personnel");
    }
  }

  /** Scatter hover: highlight the owner's connections in the structure view. */
  hoverActivity(person: number | null): void {
    if (this.highlightedPerson !== person) {
      this.highlightedPerson = person;
      this.emit("highlight");
    }
  }

  async attachSession(sessionId: string): Promise<SessionSummary> {
    this.activeSession = await this.api.getSession(sessionId);
    this.emit("session");
    return this.activeSession;
  }

  /** Template nodes already matched, for recoloring the structure views. */
  matchedTemplateNodes(): Set<number> {
    return new Set(this.activeSession?.S ?? []);
  }

  matchedTargetNodes(): Set<number> {
    return new Set(Object.values(this.activeSession?.mapping ?? {}));
  }
}
