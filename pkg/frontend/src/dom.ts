// Tiny DOM helpers; no framework, elements are built directly.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): HTMLElement {
  node.textContent = "";
  return node;
}

export function option(value: string, label: string): HTMLOptionElement {
  const opt = el("option", { value });
  opt.textContent = label;
  return opt;
}

/** Inline error banner; API failures render here, never a blank pane. */
export function errorBox(message: string): HTMLElement {
  return el("div", { class: "error-box", role: "alert" }, [message]);
}
