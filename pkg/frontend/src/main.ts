import { HttpTransport } from './api.js';
import { SessionController } from './controller.js';
import { renderLts, renderMoves, renderState, renderTimeline } from './render.js';
import { Direction } from './types.js';

// Entry point: connect to a stepping service (started with `rpnets serve
// <net>`), open a session on its preloaded net, and wire up the panels.

const SERVICE = (window as unknown as { STEPPER_URL?: string }).STEPPER_URL
  ?? 'http://127.0.0.1:8432';

async function boot(): Promise<void> {
  const transport = new HttpTransport(SERVICE);
  const controller = new SessionController(transport);
  await controller.start(null);

  const netSvg = document.getElementById('net') as unknown as SVGSVGElement;
  const ltsSvg = document.getElementById('lts') as unknown as SVGSVGElement;
  const movesBox = document.getElementById('moves') as HTMLElement;
  const timelineBox = document.getElementById('timeline') as HTMLElement;
  const directionSel = document.getElementById('direction') as HTMLSelectElement;
  const undoButton = document.getElementById('undo') as HTMLButtonElement;
  const title = document.getElementById('title') as HTMLElement;

  title.textContent = `${controller.net?.name ?? 'net'} — ${controller.semantics}`;

  const redraw = async (): Promise<void> => {
    renderState(netSvg, controller);
    renderMoves(movesBox, controller, () => void redraw());
    renderTimeline(timelineBox, controller, () => void redraw());
    await renderLts(ltsSvg, controller);
  };

  directionSel.addEventListener('change', async () => {
    await controller.refreshEnabled(directionSel.value as Direction);
    await redraw();
  });
  undoButton.addEventListener('click', async () => {
    await controller.undo();
    await redraw();
  });

  await redraw();
}

boot().catch((err) => {
  const title = document.getElementById('title');
  if (title) title.textContent = `failed to connect: ${err}`;
});
