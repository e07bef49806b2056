// Collapsible explanation trees and a small layered derivation graph,
// both rendered from the structured-tree documents the API returns.

import type { ExplanationNodeDoc, ExplanationSetDoc } from "./models.js";

function nodeLabel(node: ExplanationNodeDoc): HTMLElement {
  const span = document.createElement("span");
  const tab = node.display.indexOf("\t");
  if (tab >= 0) {
    span.append(node.display.slice(0, tab), " ");
    const weight = document.createElement("span");
    weight.className = "weight";
    weight.textContent = node.display.slice(tab + 1);
    span.append(weight);
  } else {
    span.textContent = node.display;
  }
  return span;
}

export function renderTree(node: ExplanationNodeDoc): HTMLElement {
  if (node.children.length === 0) {
    const leaf = document.createElement("div");
    leaf.className = "tree-leaf";
    leaf.append(nodeLabel(node));
    return leaf;
  }
  const details = document.createElement("details");
  details.className = "tree-node";
  details.open = true;
  const summary = document.createElement("summary");
  summary.append(nodeLabel(node));
  details.append(summary);
  const list = document.createElement("ul");
  list.className = "tree";
  for (const child of node.children) {
    const item = document.createElement("li");
    item.append(renderTree(child));
    list.append(item);
  }
  details.append(list);
  return details;
}

export function renderExplanationSets(sets: ExplanationSetDoc[]): HTMLElement {
  const root = document.createElement("div");
  root.className = "explanations";
  for (const set of sets) {
    for (const alternative of set.alternatives) {
      root.append(renderTree(alternative));
      root.append(renderGraph(alternative));
    }
    if (set.truncated > 0) {
      const more = document.createElement("p");
      more.textContent = `(+${set.truncated} more)`;
      root.append(more);
    }
  }
  return root;
}

interface Box {
  label: string;
  depth: number;
  row: number;
}

export function renderGraph(node: ExplanationNodeDoc): SVGElement {
  const boxes: Box[] = [];
  const edges: Array<[number, number]> = [];
  let nextRow = 0;

  const place = (n: ExplanationNodeDoc, depth: number): number => {
    const index = boxes.length;
    boxes.push({ label: n.display.replace("\t", " "), depth, row: 0 });
    const childIndexes = n.children.map((c) => place(c, depth + 1));
    for (const c of childIndexes) {
      edges.push([index, c]);
    }
    if (childIndexes.length > 0) {
      const first = boxes[childIndexes[0]].row;
      const last = boxes[childIndexes[childIndexes.length - 1]].row;
      boxes[index].row = (first + last) / 2;
    } else {
      boxes[index].row = nextRow;
      nextRow += 1;
    }
    return index;
  };
  place(node, 0);

  const colWidth = 250;
  const rowHeight = 32;
  const boxWidth = 220;
  const boxHeight = 22;
  const ns = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(ns, "svg");
  svg.setAttribute("class", "graph");
  const width = (Math.max(...boxes.map((b) => b.depth)) + 1) * colWidth + 16;
  const height = Math.max(nextRow, 1) * rowHeight + 12;
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));

  for (const [a, b] of edges) {
    const line = document.createElementNS(ns, "line");
    line.setAttribute("x1", String(boxes[a].depth * colWidth + 8 + boxWidth));
    line.setAttribute("y1", String(boxes[a].row * rowHeight + 8 + boxHeight / 2));
    line.setAttribute("x2", String(boxes[b].depth * colWidth + 8));
    line.setAttribute("y2", String(boxes[b].row * rowHeight + 8 + boxHeight / 2));
    line.setAttribute("stroke", "#8a97a0");
    svg.append(line);
  }
  for (const box of boxes) {
    const x = box.depth * colWidth + 8;
    const y = box.row * rowHeight + 8;
    const rect = document.createElementNS(ns, "rect");
    rect.setAttribute("x", String(x));
    rect.setAttribute("y", String(y));
    rect.setAttribute("width", String(boxWidth));
    rect.setAttribute("height", String(boxHeight));
    rect.setAttribute("rx", "4");
    rect.setAttribute("fill", "#ffffff");
    rect.setAttribute("stroke", "#5b6770");
    svg.append(rect);
    const text = document.createElementNS(ns, "text");
    text.setAttribute("x", String(x + 6));
    text.setAttribute("y", String(y + 15));
    text.setAttribute("font-size", "11");
    text.textContent = box.label.length > 36 ? box.label.slice(0, 35) + "…" : box.label;
    svg.append(text);
  }
  return svg;
}
