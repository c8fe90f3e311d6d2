// Hover-to-inspect tooltip over served SVGs.  Every visual element in a
// diagram carries data-label (the full identifier or class name), so the
// tooltip simply surfaces the nearest labelled ancestor of whatever the
// pointer is over.  Hovering blank background shows nothing.

export interface Tooltip {
  element: HTMLDivElement;
  attach(container: HTMLElement): void;
  hide(): void;
  destroy(): void;
}

export function createTooltip(doc: Document = document): Tooltip {
  const element = doc.createElement("div");
  element.className = "gg-tooltip";
  element.style.position = "fixed";
  element.style.pointerEvents = "none";
  element.style.display = "none";
  element.style.background = "#222";
  element.style.color = "#fff";
  element.style.padding = "2px 6px";
  element.style.borderRadius = "3px";
  element.style.font = "12px monospace";
  element.style.zIndex = "10";
  doc.body.appendChild(element);

  function show(label: string, x: number, y: number): void {
    element.textContent = label;
    element.style.left = `${x + 12}px`;
    element.style.top = `${y + 12}px`;
    element.style.display = "block";
  }

  function hide(): void {
    element.style.display = "none";
  }

  function onMove(event: MouseEvent): void {
    const target = event.target as Element | null;
    const labelled = target?.closest?.("[data-label]") ?? null;
    const label = labelled?.getAttribute("data-label");
    if (label) {
      show(label, event.clientX, event.clientY);
    } else {
      hide();
    }
  }

  const attached: HTMLElement[] = [];

  return {
    element,
    attach(container: HTMLElement): void {
      container.addEventListener("mousemove", onMove);
      container.addEventListener("mouseover", onMove);
      container.addEventListener("mouseleave", hide);
      attached.push(container);
    },
    hide,
    destroy(): void {
      for (const container of attached) {
        container.removeEventListener("mousemove", onMove);
        container.removeEventListener("mouseover", onMove);
        container.removeEventListener("mouseleave", hide);
      }
      element.remove();
    },
  };
}
