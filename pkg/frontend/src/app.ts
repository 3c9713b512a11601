// Browser bootstrap: wires the store, renderers, and review controller into
// the three-panel shell in index.html. All logic worth testing lives in the
// imported modules; this file is DOM plumbing.

import { ApiClient } from "./api.js";
import {
  barChart,
  emptyState,
  frequencyChart,
  heatmapView,
  reviewDialog,
  spaceView,
  structureView,
  timeScatter,
} from "./render.js";
import { ReviewController } from "./review.js";
import { UiStore } from "./state.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id} in index.html`);
  return node;
}

export function startApp(baseUrl = ""): void {
  const api = new ApiClient(baseUrl);
  const store = new UiStore(api);
  let review: ReviewController | null = null;

  const controls = el("control-panel");
  const organization = el("organization-panel");
  const personnel = el("personnel-panel");
  const dialog = el("review-dialog");

  function renderControls(): void {
    const blocks: string[] = [];
    for (const graph of store.graphs.values()) {
      const toggles = Object.keys(graph.data.stats.channels)
        .sort()
        .map((ch) => {
          const on = graph.view.channels.includes(ch);
          return (
            `<label><input type="checkbox" data-graph="${graph.id}" data-channel="${ch}"` +
            ` ${on ? "checked" : ""}/> ${ch}</label>`
          );
        })
        .join("");
      blocks.push(
        `<section class="graph-controls" data-graph="${graph.id}">` +
        `<h3>${graph.id}</h3>${toggles}` +
        `<label>offset <input type="number" class="offset" data-graph="${graph.id}"` +
        ` value="${graph.view.time_offset}"/></label>` +
        `</section>`,
      );
    }
    controls.innerHTML = blocks.join("") || emptyState("no graphs open");
  }

  function renderOrganization(): void {
    const blocks: string[] = [];
    for (const graph of store.graphs.values()) {
      blocks.push(
        `<section class="organization" data-graph="${graph.id}">` +
        `<h3>${graph.id}</h3>` +
        frequencyChart(graph.data.histogram) +
        `<div class="views">` +
        `<div class="view time">${timeScatter(graph.data.scatter)}</div>` +
        `<div class="view space">${spaceView(graph.data.spatial)}</div>` +
        `<div class="view structure">${structureView(graph.data.structure, {
          graphId: graph.id,
          selected: new Set(
            store.personTabs.filter((t) => t.graph === graph.id).map((t) => t.person),
          ),
          matched: store.matchedTemplateNodes(),
          highlightPerson: store.highlightedPerson,
        })}</div>` +
        `</div></section>`,
      );
    }
    organization.innerHTML = blocks.join("") || emptyState("open a graph to explore");
  }

  function renderPersonnel(): void {
    const tabs = store.personTabs
      .map(
        (tab) =>
          `<div class="person-tab" data-graph="${tab.graph}" data-person="${tab.person}">` +
          `<h4>${tab.graph} / ${tab.person}</h4>${barChart(tab.channels)}</div>`,
      )
      .join("");
    const heat = store.heatmap ? heatmapView(store.heatmap) : emptyState("select persons");
    personnel.innerHTML =
      (tabs || emptyState("click structure nodes to inspect persons")) +
      `<div class="heatmap-block"><h4>${store.heatmapChannel}</h4>${heat}</div>`;
  }

  function renderReview(): void {
    if (!review) {
      dialog.innerHTML = "";
      dialog.hidden = true;
      return;
    }
    dialog.hidden = false;
    if (review.state === "reviewing" && review.current) {
      const { matched, total } = review.progress();
      dialog.innerHTML =
        `<div class="progress">${matched} / ${total} matched</div>` +
        reviewDialog(review.current, review.sessionId);
    } else if (review.state === "error") {
      dialog.innerHTML =
        `<div class="error">${review.lastError?.code}: ${review.lastError?.message}</div>` +
        `<button data-action="retry">Retry</button>`;
    } else {
      dialog.innerHTML = `<div class="terminal">session ${review.state}</div>`;
    }
  }

  store.subscribe((event) => {
    if (event.startsWith("graph:")) {
      renderControls();
      renderOrganization();
    } else if (event === "personnel") {
      renderPersonnel();
      renderOrganization(); // selection rings live in the structure views
    } else if (event === "highlight") {
      renderOrganization();
    } else if (event === "session") {
      renderOrganization();
    }
  });

  controls.addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const graphId = input.dataset.graph;
    if (!graphId) return;
    const graph = store.graphs.get(graphId);
    if (!graph) return;
    if (input.dataset.channel) {
      const channels = new Set(graph.view.channels);
      if (input.checked) channels.add(input.dataset.channel);
      else channels.delete(input.dataset.channel);
      void store.setViewControls(graphId, { channels: [...channels].sort() });
    } else if (input.classList.contains("offset")) {
      void store.setViewControls(graphId, { time_offset: Number(input.value) });
    }
  });

  organization.addEventListener("click", (ev) => {
    const target = ev.target as SVGElement;
    const person = target.getAttribute("data-person");
    const section = target.closest("[data-graph]") as HTMLElement | null;
    if (person && section?.dataset.graph && target.classList.contains("person")) {
      void store.selectPerson(section.dataset.graph, Number(person));
    }
  });

  organization.addEventListener("mouseover", (ev) => {
    const target = ev.target as SVGElement;
    if (target.classList.contains("activity")) {
      store.hoverActivity(Number(target.getAttribute("data-person")));
    }
  });
  organization.addEventListener("mouseout", (ev) => {
    const target = ev.target as SVGElement;
    if (target.classList.contains("activity")) store.hoverActivity(null);
  });

  dialog.addEventListener("click", (ev) => {
    const button = ev.target as HTMLButtonElement;
    const action = button.dataset.action;
    if (!review || !action) return;
    const done = () => {
      void store.attachSession(review!.sessionId).then(renderReview);
    };
    if (action === "accept") void review.accept().then(done);
    else if (action === "reject") void review.reject().then(done);
    else if (action === "retry") void review.retry().then(renderReview);
  });

  const params = new URLSearchParams(window.location.search);
  const openIds = (params.get("graphs") ?? "").split(",").filter(Boolean);
  void (async () => {
    if (openIds.length === 0) {
      const listed = await api.listGraphs();
      openIds.push(...listed.graphs.slice(0, 2).map((g) => g.id));
    }
    for (const id of openIds) await store.openGraph(id);
    const sessionId = params.get("session");
    if (sessionId) {
      await store.attachSession(sessionId);
      review = new ReviewController(api, sessionId);
      await review.load();
      renderReview();
    }
  })();
}

declare global {
  interface Window {
    tgmatchStart?: typeof startApp;
  }
}

if (typeof window !== "undefined" && typeof document !== "undefined") {
  window.tgmatchStart = startApp;
  if (document.readyState !== "loading") startApp();
  else document.addEventListener("DOMContentLoaded", () => startApp());
}
