import { SessionController } from './controller.js';
import {
  buildLtsView,
  buildMoveRows,
  buildNetView,
  NetVM,
} from './viewmodel.js';

// Browser-side SVG/DOM rendering. Everything shown here is read straight
// from controller state, which in turn mirrors service responses.

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

export function renderNet(svg: SVGSVGElement, vm: NetVM): void {
  svg.replaceChildren();
  const byId = new Map(vm.nodes.map((n) => [n.id, n]));
  for (const arc of vm.arcs) {
    const from = byId.get(arc.from);
    const to = byId.get(arc.to);
    if (!from || !to) continue;
    svg.appendChild(svgEl('line', {
      x1: from.x, y1: from.y, x2: to.x, y2: to.y,
      class: 'arc', 'marker-end': 'url(#arrow)',
    }));
    svg.appendChild(Object.assign(svgEl('text', {
      x: (from.x + to.x) / 2, y: (from.y + to.y) / 2 - 4, class: 'arc-label',
    }), { textContent: arc.label }));
  }
  const tokenById = new Map(vm.tokens.map((t) => [t.id, t]));
  for (const bond of vm.bonds) {
    const a = tokenById.get(bond.a);
    const b = tokenById.get(bond.b);
    if (!a || !b) continue;
    svg.appendChild(svgEl('line', {
      x1: a.x, y1: a.y, x2: b.x, y2: b.y, class: 'bond',
    }));
  }
  for (const node of vm.nodes) {
    if (node.kind === 'place') {
      svg.appendChild(svgEl('circle', {
        cx: node.x, cy: node.y, r: 26, class: 'place',
      }));
    } else {
      svg.appendChild(svgEl('rect', {
        x: node.x - 18, y: node.y - 14, width: 36, height: 28, class: 'transition',
      }));
    }
    svg.appendChild(Object.assign(svgEl('text', {
      x: node.x, y: node.y - (node.kind === 'place' ? 32 : 20), class: 'node-label',
    }), { textContent: node.label }));
  }
  for (const token of vm.tokens) {
    svg.appendChild(svgEl('circle', {
      cx: token.x, cy: token.y, r: 5, class: 'token',
    }));
    svg.appendChild(Object.assign(svgEl('text', {
      x: token.x + 7, y: token.y + 3, class: 'token-label',
    }), { textContent: token.label }));
  }
}

export function renderMoves(
  container: HTMLElement,
  controller: SessionController,
  onFired: () => void,
): void {
  container.replaceChildren();
  const rows = buildMoveRows(controller.moves());
  if (rows.length === 0) {
    const banner = document.createElement('div');
    banner.className = 'banner';
    banner.textContent = controller.isDeadlocked() ? 'deadlock' : 'no moves in this direction';
    container.appendChild(banner);
    return;
  }
  for (const row of rows) {
    const button = document.createElement('button');
    button.className = 'move';
    const condition = row.conditionText ? `  [${row.conditionText}]` : '';
    button.textContent = `${row.label}  {${row.bindings}}${condition}`;
    button.addEventListener('click', async () => {
      await controller.fire(row.index);
      onFired();
    });
    container.appendChild(button);
  }
}

export function renderTimeline(
  container: HTMLElement,
  controller: SessionController,
  onFired: () => void,
): void {
  container.replaceChildren();
  for (const entry of controller.timeline()) {
    const chip = document.createElement('button');
    chip.className = entry.reversible ? 'occurrence reversible' : 'occurrence';
    chip.textContent = `${entry.transition}:${entry.key}`;
    chip.disabled = !entry.reversible;
    if (entry.moveIndex !== null) {
      const idx = entry.moveIndex;
      chip.addEventListener('click', async () => {
        await controller.fire(idx);
        onFired();
      });
    }
    container.appendChild(chip);
  }
}

export async function renderLts(
  svg: SVGSVGElement,
  controller: SessionController,
): Promise<void> {
  const vm = buildLtsView(await controller.lts(64));
  svg.replaceChildren();
  const byId = new Map(vm.nodes.map((n) => [n.id, n]));
  for (const edge of vm.edges) {
    const a = byId.get(edge.src);
    const b = byId.get(edge.dst);
    if (!a || !b) continue;
    svg.appendChild(svgEl('line', {
      x1: a.x, y1: a.y, x2: b.x, y2: b.y,
      class: edge.reverse ? 'lts-edge reverse' : 'lts-edge',
    }));
  }
  for (const node of vm.nodes) {
    svg.appendChild(svgEl('circle', {
      cx: node.x, cy: node.y, r: node.current ? 7 : 4,
      class: node.current ? 'lts-node current' : node.initial ? 'lts-node initial' : 'lts-node',
    }));
  }
  if (vm.truncated) {
    svg.appendChild(Object.assign(svgEl('text', { x: 8, y: 14, class: 'banner' }),
      { textContent: 'truncated' }));
  }
}

export function renderState(
  svg: SVGSVGElement,
  controller: SessionController,
): void {
  if (!controller.net || !controller.state) return;
  renderNet(svg, buildNetView(controller.net, controller.state, controller.layout));
}
