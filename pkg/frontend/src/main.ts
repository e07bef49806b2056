// Application shell: hash router over the three workbench views.

import { ApiClient } from "./api.js";
import { EditorView } from "./views/editor.js";
import { ResultsView } from "./views/results.js";
import { TransplantsView } from "./views/transplants.js";

const api = new ApiClient();

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, text?: string, className?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text) node.textContent = text;
  if (className) node.className = className;
  return node;
}

async function classifiersIndex(outlet: HTMLElement): Promise<void> {
  const docs = await api.listClassifiers();
  outlet.replaceChildren(el("h2", "classifiers"));
  const list = el("ul", undefined, "classifier-list");
  for (const doc of docs) {
    const item = el("li");
    const link = el("a", `${doc.name} (${doc.id}, v${doc.version ?? 1}, ` +
      `${doc.rules.length} rules)`);
    link.href = `#/classifiers/${doc.id}`;
    const clone = el("button", "clone");
    clone.addEventListener("click", async () => {
      const copy = await api.cloneClassifier(doc.id);
      location.hash = `#/classifiers/${copy.id}`;
    });
    const remove = el("button", "delete");
    remove.addEventListener("click", async () => {
      try {
        await api.deleteClassifier(doc.id);
      } catch (err) {
        alert((err as Error).message);
        return;
      }
      await classifiersIndex(outlet);
    });
    item.append(link, " ", clone, " ", remove);
    list.append(item);
  }
  outlet.append(list);
}

async function resultsIndex(outlet: HTMLElement): Promise<void> {
  const [classifiers, datasets, runs] = await Promise.all([
    api.listClassifiers(), api.listDatasets(), api.listRuns(),
  ]);
  outlet.replaceChildren(el("h2", "runs"));

  const launcher = el("div", undefined, "launcher");
  const classifierSelect = el("select");
  for (const c of classifiers) {
    const option = el("option", c.id);
    option.value = c.id;
    classifierSelect.append(option);
  }
  const datasetSelect = el("select");
  for (const d of datasets) {
    const option = el("option", `${d.id} (${d.cases} cases)`);
    option.value = d.id;
    datasetSelect.append(option);
  }
  const launch = el("button", "run");
  launch.addEventListener("click", async () => {
    launch.disabled = true;
    try {
      const run = await api.runClassifier(classifierSelect.value, datasetSelect.value);
      location.hash = `#/results/${run.run_id}`;
    } catch (err) {
      alert((err as Error).message);
    } finally {
      launch.disabled = false;
    }
  });
  launcher.append("classifier ", classifierSelect, " dataset ", datasetSelect,
    " ", launch);
  if (datasets.length === 0) {
    const hint = el("p",
      "no datasets yet — create one, e.g. 76 synthetic cases with seed 42");
    const make = el("button", "create demo dataset");
    make.addEventListener("click", async () => {
      await api.createDataset("demo", { n: 76, seed: 42 });
      await resultsIndex(outlet);
    });
    hint.append(" ", make);
    launcher.append(hint);
  }
  outlet.append(launcher);

  const list = el("ul", undefined, "run-list");
  for (const run of runs) {
    const item = el("li");
    const link = el("a", `${run.run_id} — ${run.classifier_id} ` +
      `v${run.classifier_version} over ${run.dataset_id} ` +
      `(${run.cases} cases, ${run.failures} failed)`);
    link.href = `#/results/${run.run_id}`;
    item.append(link);
    list.append(item);
  }
  outlet.append(list);
}

async function transplantsIndex(outlet: HTMLElement): Promise<void> {
  const datasets = await api.listDatasets();
  outlet.replaceChildren(el("h2", "transplants"));
  if (datasets.length === 0) {
    outlet.append(el("p", "no datasets loaded"));
    return;
  }
  const view = new TransplantsView(api);
  const select = el("select");
  for (const d of datasets) {
    const option = el("option", d.id);
    option.value = d.id;
    select.append(option);
  }
  select.addEventListener("change", () => void view.load(select.value));
  outlet.append(select, view.element);
  await view.load(datasets[0].id);
}

export async function route(outlet: HTMLElement, hash: string): Promise<void> {
  const parts = hash.replace(/^#\/?/, "").split("/").filter(Boolean);
  try {
    if (parts[0] === "classifiers" && parts[1]) {
      const editor = new EditorView(api);
      outlet.replaceChildren(editor.element);
      await editor.load(parts[1]);
    } else if (parts[0] === "results" && parts[1]) {
      const results = new ResultsView(api);
      outlet.replaceChildren(results.element);
      await results.load(parts[1]);
    } else if (parts[0] === "results") {
      await resultsIndex(outlet);
    } else if (parts[0] === "transplants") {
      await transplantsIndex(outlet);
    } else {
      await classifiersIndex(outlet);
    }
  } catch (err) {
    outlet.replaceChildren(el("p", (err as Error).message, "notice"));
  }
}

function start(): void {
  const outlet = document.getElementById("outlet");
  if (!outlet) return;
  const go = () => void route(outlet, location.hash);
  window.addEventListener("hashchange", go);
  go();
}

if (typeof document !== "undefined" && document.getElementById("outlet")) {
  start();
}
